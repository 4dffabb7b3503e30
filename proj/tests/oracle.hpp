// Brute-force reference semantics used to cross-check the solver. Kept
// deliberately naive: models are explicit element lists and quantifiers are
// evaluated with direct loops, sharing no representation with the library's
// cell-mask enumeration.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "syllo/logic.hpp"

namespace oracle {

// One domain element, described by which of the (up to three) terms it
// belongs to.
struct Element {
  bool member[3] = {false, false, false};
};

using Model = std::vector<Element>;

inline std::vector<std::string> collect_terms(
    const std::vector<syllo::Proposition>& props) {
  std::vector<std::string> terms;
  auto add = [&terms](const std::string& t) {
    if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
  };
  for (const auto& p : props) {
    add(p.subject);
    add(p.predicate);
  }
  return terms;
}

inline int term_index(const std::vector<std::string>& terms, const std::string& t) {
  return static_cast<int>(std::find(terms.begin(), terms.end(), t) - terms.begin());
}

// Every model over k unary predicates, up to the only distinctions monadic
// sentences can see: which membership profiles are inhabited. Each profile
// contributes at most one element.
inline std::vector<Model> all_models(int term_count) {
  const int profiles = 1 << term_count;
  std::vector<Model> models;
  for (int chosen = 0; chosen < (1 << profiles); ++chosen) {
    Model m;
    for (int profile = 0; profile < profiles; ++profile) {
      if (!(chosen & (1 << profile))) continue;
      Element e;
      for (int t = 0; t < term_count; ++t) e.member[t] = (profile >> t) & 1;
      m.push_back(e);
    }
    models.push_back(std::move(m));
  }
  return models;
}

inline bool proposition_true(const syllo::Proposition& p, const Model& m,
                             const std::vector<std::string>& terms,
                             syllo::SemanticsMode mode) {
  const int s = term_index(terms, p.subject);
  const int q = term_index(terms, p.predicate);
  auto in_subject = [&](const Element& e) { return e.member[s]; };
  auto in_predicate = [&](const Element& e) { return e.member[q]; };

  bool base = false;
  switch (p.type) {
    case syllo::PropositionType::A:
      base = std::all_of(m.begin(), m.end(), [&](const Element& e) {
        return !in_subject(e) || in_predicate(e);
      });
      break;
    case syllo::PropositionType::E:
      base = std::none_of(m.begin(), m.end(), [&](const Element& e) {
        return in_subject(e) && in_predicate(e);
      });
      break;
    case syllo::PropositionType::I:
      base = std::any_of(m.begin(), m.end(), [&](const Element& e) {
        return in_subject(e) && in_predicate(e);
      });
      break;
    case syllo::PropositionType::O:
      base = std::any_of(m.begin(), m.end(), [&](const Element& e) {
        return in_subject(e) && !in_predicate(e);
      });
      break;
  }
  if (mode == syllo::SemanticsMode::SubjectImport && syllo::is_universal(p.type)) {
    base = base && std::any_of(m.begin(), m.end(), in_subject);
  }
  return base;
}

inline bool model_admissible(const Model& m, int term_count,
                             syllo::SemanticsMode mode) {
  if (mode != syllo::SemanticsMode::AllTermsNonempty) return true;
  for (int t = 0; t < term_count; ++t) {
    const bool inhabited = std::any_of(m.begin(), m.end(),
                                       [&](const Element& e) { return e.member[t]; });
    if (!inhabited) return false;
  }
  return true;
}

inline bool check_sat(const std::vector<syllo::Proposition>& props,
                      syllo::SemanticsMode mode) {
  const auto terms = collect_terms(props);
  for (const Model& m : all_models(static_cast<int>(terms.size()))) {
    if (!model_admissible(m, static_cast<int>(terms.size()), mode)) continue;
    const bool all_hold = std::all_of(props.begin(), props.end(), [&](const auto& p) {
      return proposition_true(p, m, terms, mode);
    });
    if (all_hold) return true;
  }
  return false;
}

// Mirrors the solver contract: Indeterminate on jointly unsatisfiable
// premises, otherwise Valid iff every premise model satisfies the conclusion.
// The conclusion itself is read without an import clause; denying it already
// supplies the subject witness (the negation of A is an O-form and the
// negation of E is an I-form).
inline syllo::Verdict decide_validity(const syllo::SyllogismStructure& s,
                                      syllo::SemanticsMode mode) {
  const std::vector<syllo::Proposition> premises{s.premise1, s.premise2};
  if (!check_sat(premises, mode)) return syllo::Verdict::Indeterminate;

  std::vector<std::string> terms(s.terms.begin(), s.terms.end());
  for (const Model& m : all_models(3)) {
    if (!model_admissible(m, 3, mode)) continue;
    const bool premises_hold =
        proposition_true(s.premise1, m, terms, mode) &&
        proposition_true(s.premise2, m, terms, mode);
    if (!premises_hold) continue;
    if (!proposition_true(s.conclusion, m, terms, syllo::SemanticsMode::Boolean)) {
      return syllo::Verdict::Invalid;
    }
  }
  return syllo::Verdict::Valid;
}

}  // namespace oracle
