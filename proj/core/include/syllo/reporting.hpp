#pragma once

#include <string>

#include "json.hpp"
#include "syllo/pipeline.hpp"

namespace syllo {

// Machine-readable report shapes (instance traces are not serialized).
nlohmann::json to_json(const MetricsReport& r);
nlohmann::json to_json(const FoldAggregate& a);
nlohmann::json to_json(const RunReport& r);
nlohmann::json to_json(const SelectionResult& r);
nlohmann::json to_json(const CvResult& r);
nlohmann::json to_json(const ImportScanReport& r);

MetricsReport metrics_report_from_json(const nlohmann::json& j);
RunReport run_report_from_json(const nlohmann::json& j);
SelectionResult selection_result_from_json(const nlohmann::json& j);
CvResult cv_result_from_json(const nlohmann::json& j);

// Human-readable tables. Columns follow the report layout used throughout:
// strategies as rows with Acc/CE/Score, subgroups as VB/VU/IB/IU columns,
// and a behavior table of tiebreaker counts.
std::string render_strategy_table(const CvResult& result);
std::string render_subgroup_table(const CvResult& result);
std::string render_behavior_table(const CvResult& result);
std::string render_selection_table(const SelectionResult& result);
std::string render_import_scan(const ImportScanReport& report);

// Tab-separated variants of the same tables.
std::string strategy_table_tsv(const CvResult& result);
std::string subgroup_table_tsv(const CvResult& result);
std::string behavior_table_tsv(const CvResult& result);

}  // namespace syllo
