#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace syllo {

// The four categorical proposition types. A and E are universal, I and O
// particular.
enum class PropositionType : std::uint8_t { A, E, I, O };

bool is_universal(PropositionType t);
char to_char(PropositionType t);
std::optional<PropositionType> proposition_type_from(char c);

// Canonical term identifier, as produced by normalize_term() in the parser.
using TermId = std::string;

struct Proposition {
  PropositionType type = PropositionType::A;
  TermId subject;
  TermId predicate;

  bool operator==(const Proposition&) const = default;
};

// Two premises and a conclusion over exactly three distinct terms. The term
// list is kept in first-appearance order (premise1 subject, premise1
// predicate, then whatever premise2/conclusion introduce).
struct SyllogismStructure {
  std::array<TermId, 3> terms{};
  Proposition premise1;
  Proposition premise2;
  Proposition conclusion;

  bool operator==(const SyllogismStructure&) const = default;
};

// Existential-import handling:
//   Boolean          - propositions carry no import; universals may be vacuous.
//   SubjectImport    - every universal proposition additionally asserts its
//                      subject is nonempty.
//   AllTermsNonempty - every term is constrained to be inhabited; proposition
//                      truth itself is the Boolean reading.
enum class SemanticsMode : std::uint8_t { Boolean, SubjectImport, AllTermsNonempty };

enum class Verdict : std::uint8_t { Valid, Invalid, Indeterminate };

const char* to_string(Verdict v);
const char* to_string(SemanticsMode m);
std::optional<SemanticsMode> semantics_mode_from(std::string_view name);
std::optional<Verdict> verdict_from(std::string_view name);

// A model of up to three monadic predicates, represented by which of the
// 2^k intersection cells are inhabited (k = term count). Cell c contains
// term t exactly when bit t of c is set. For three terms there are 8 cells
// and 256 models, which exhaust the semantics of any sentence over three
// unary predicates.
class CellModel {
 public:
  static constexpr int kMaxTerms = 3;

  explicit CellModel(std::uint8_t inhabited_cells, int term_count = 3);

  bool inhabited(unsigned cell) const { return (cells_ >> cell) & 1u; }
  int term_count() const { return term_count_; }
  std::uint8_t cells() const { return cells_; }
  unsigned cell_count() const { return 1u << term_count_; }

  // Mask of inhabited cells lying inside term t's extension.
  std::uint8_t extension(unsigned term) const;

 private:
  std::uint8_t cells_ = 0;
  int term_count_ = 3;
};

// Truth of a single proposition in a single model. `terms` fixes the
// bit position of each term id; the proposition's terms must be among them.
bool holds_in_model(const Proposition& p, const CellModel& m,
                    std::span<const TermId> terms, SemanticsMode mode);

// Joint satisfiability of a proposition set over at most three terms,
// decided by exhaustive enumeration of all cell models.
bool check_sat(std::span<const Proposition> props, SemanticsMode mode);

// Two-step validity check: Indeterminate when the premises are jointly
// unsatisfiable, otherwise Valid iff the conclusion holds in every model of
// the premises. Throws std::invalid_argument on a malformed structure.
Verdict decide_validity(const SyllogismStructure& s, SemanticsMode mode);

// Throws std::invalid_argument unless the structure has three distinct
// terms, every proposition's terms are listed, and no proposition relates a
// term to itself.
void check_well_formed(const SyllogismStructure& s);

// Mood and figure. Mood orders the premises major-first (the major premise
// contains the conclusion's predicate); figures follow the usual middle-term
// arrangement:
//   1: M-P, S-M   2: P-M, S-M   3: M-P, M-S   4: P-M, M-S
struct SyllogisticForm {
  PropositionType major = PropositionType::A;
  PropositionType minor = PropositionType::A;
  PropositionType conclusion = PropositionType::A;
  int figure = 1;

  std::string name() const;  // e.g. "EAO-3"
  bool operator==(const SyllogisticForm&) const = default;
};

SyllogismStructure instantiate_form(const SyllogisticForm& form,
                                    const TermId& minor_term,
                                    const TermId& major_term,
                                    const TermId& middle_term);

// Recovers mood/figure from a structure in standard shape (each premise
// shares exactly the middle term with the other, conclusion relates minor to
// major). Returns nullopt for degenerate shapes.
std::optional<SyllogisticForm> identify_form(const SyllogismStructure& s);

struct FormVerdict {
  SyllogisticForm form;
  Verdict verdict = Verdict::Indeterminate;
};

// One verdict for each of the 256 mood x figure forms, in a fixed order
// (figure-major, then mood in AEIO order).
std::vector<FormVerdict> enumerate_forms(SemanticsMode mode);

enum class SmtCheck : std::uint8_t { PremiseConsistency, Entailment };

// SMT-LIB v2 rendering of the structure under the given mode: one sort, one
// unary predicate per term, premise assertions with their import axioms, and
// for Entailment the negated conclusion. Output is byte-stable for identical
// inputs. Entailment scripts answer unsat exactly when the structure is
// valid; PremiseConsistency scripts answer sat exactly when the premises are
// consistent.
std::string emit_smtlib(const SyllogismStructure& s, SemanticsMode mode, SmtCheck check);

}  // namespace syllo
