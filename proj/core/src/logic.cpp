#include "syllo/logic.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace syllo {

bool is_universal(PropositionType t) {
  return t == PropositionType::A || t == PropositionType::E;
}

char to_char(PropositionType t) {
  switch (t) {
    case PropositionType::A: return 'A';
    case PropositionType::E: return 'E';
    case PropositionType::I: return 'I';
    case PropositionType::O: return 'O';
  }
  return '?';
}

std::optional<PropositionType> proposition_type_from(char c) {
  switch (c) {
    case 'A': case 'a': return PropositionType::A;
    case 'E': case 'e': return PropositionType::E;
    case 'I': case 'i': return PropositionType::I;
    case 'O': case 'o': return PropositionType::O;
    default: return std::nullopt;
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Invalid: return "invalid";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

const char* to_string(SemanticsMode m) {
  switch (m) {
    case SemanticsMode::Boolean: return "boolean";
    case SemanticsMode::SubjectImport: return "subject-import";
    case SemanticsMode::AllTermsNonempty: return "all-terms-nonempty";
  }
  return "?";
}

std::optional<SemanticsMode> semantics_mode_from(std::string_view name) {
  if (name == "boolean") return SemanticsMode::Boolean;
  if (name == "subject-import") return SemanticsMode::SubjectImport;
  if (name == "all-terms-nonempty") return SemanticsMode::AllTermsNonempty;
  return std::nullopt;
}

std::optional<Verdict> verdict_from(std::string_view name) {
  if (name == "valid") return Verdict::Valid;
  if (name == "invalid") return Verdict::Invalid;
  if (name == "indeterminate") return Verdict::Indeterminate;
  return std::nullopt;
}

CellModel::CellModel(std::uint8_t inhabited_cells, int term_count)
    : cells_(inhabited_cells), term_count_(term_count) {
  if (term_count < 1 || term_count > kMaxTerms) {
    throw std::invalid_argument("cell model supports 1..3 terms");
  }
  if (term_count < kMaxTerms) {
    cells_ &= static_cast<std::uint8_t>((1u << (1u << term_count)) - 1u);
  }
}

std::uint8_t CellModel::extension(unsigned term) const {
  // Cells whose index has bit `term` set, restricted to inhabited cells.
  static constexpr std::uint8_t kTermMask[3] = {0xAA, 0xCC, 0xF0};
  if (term >= static_cast<unsigned>(term_count_)) {
    throw std::out_of_range("term index out of range");
  }
  return static_cast<std::uint8_t>(cells_ & kTermMask[term]);
}

namespace {

unsigned term_index(const TermId& t, std::span<const TermId> terms) {
  for (unsigned i = 0; i < terms.size(); ++i) {
    if (terms[i] == t) return i;
  }
  throw std::invalid_argument("proposition term not in term list: " + t);
}

// Boolean truth, ignoring import.
bool holds_boolean(PropositionType type, std::uint8_t sub, std::uint8_t pred) {
  switch (type) {
    case PropositionType::A: return (sub & ~pred) == 0;
    case PropositionType::E: return (sub & pred) == 0;
    case PropositionType::I: return (sub & pred) != 0;
    case PropositionType::O: return (sub & ~pred) != 0;
  }
  return false;
}

}  // namespace

bool holds_in_model(const Proposition& p, const CellModel& m,
                    std::span<const TermId> terms, SemanticsMode mode) {
  const std::uint8_t sub = m.extension(term_index(p.subject, terms));
  const std::uint8_t pred = m.extension(term_index(p.predicate, terms));
  if (!holds_boolean(p.type, sub, pred)) return false;
  if (mode == SemanticsMode::SubjectImport && is_universal(p.type)) {
    return sub != 0;
  }
  return true;
}

namespace {

std::vector<TermId> collect_terms(std::span<const Proposition> props) {
  std::vector<TermId> terms;
  for (const auto& p : props) {
    for (const TermId* t : {&p.subject, &p.predicate}) {
      if (std::find(terms.begin(), terms.end(), *t) == terms.end()) {
        terms.push_back(*t);
      }
    }
  }
  return terms;
}

bool model_admissible(const CellModel& m, SemanticsMode mode) {
  if (mode != SemanticsMode::AllTermsNonempty) return true;
  for (int t = 0; t < m.term_count(); ++t) {
    if (m.extension(static_cast<unsigned>(t)) == 0) return false;
  }
  return true;
}

}  // namespace

bool check_sat(std::span<const Proposition> props, SemanticsMode mode) {
  const std::vector<TermId> terms = collect_terms(props);
  if (terms.size() > CellModel::kMaxTerms) {
    throw std::invalid_argument("at most three distinct terms are supported");
  }
  const int n = terms.empty() ? 1 : static_cast<int>(terms.size());
  const unsigned model_count = 1u << (1u << n);
  for (unsigned bits = 0; bits < model_count; ++bits) {
    CellModel m(static_cast<std::uint8_t>(bits), n);
    if (!model_admissible(m, mode)) continue;
    bool all = true;
    for (const auto& p : props) {
      if (!holds_in_model(p, m, terms, mode)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

void check_well_formed(const SyllogismStructure& s) {
  std::set<TermId> distinct(s.terms.begin(), s.terms.end());
  if (distinct.size() != 3) {
    throw std::invalid_argument("structure must have three distinct terms");
  }
  for (const Proposition* p : {&s.premise1, &s.premise2, &s.conclusion}) {
    if (p->subject == p->predicate) {
      throw std::invalid_argument("proposition relates a term to itself");
    }
    for (const TermId* t : {&p->subject, &p->predicate}) {
      if (!distinct.contains(*t)) {
        throw std::invalid_argument("proposition uses unlisted term: " + *t);
      }
    }
  }
}

Verdict decide_validity(const SyllogismStructure& s, SemanticsMode mode) {
  check_well_formed(s);
  const std::span<const TermId> terms(s.terms);
  const std::array<const Proposition*, 2> premises{&s.premise1, &s.premise2};

  bool premises_sat = false;
  bool counter_model = false;
  for (unsigned bits = 0; bits < 256; ++bits) {
    CellModel m(static_cast<std::uint8_t>(bits));
    if (!model_admissible(m, mode)) continue;
    bool prem = true;
    for (const Proposition* p : premises) {
      if (!holds_in_model(*p, m, terms, mode)) {
        prem = false;
        break;
      }
    }
    if (!prem) continue;
    premises_sat = true;
    // The conclusion is read without its own import clause: denying a
    // universal conclusion already asserts a nonempty subject, so an import
    // conjunct on the conclusion side would be redundant as a presupposition
    // and wrong as part of the claim under refutation.
    if (!holds_in_model(s.conclusion, m, terms, SemanticsMode::Boolean)) {
      counter_model = true;
      break;
    }
  }
  if (!premises_sat) return Verdict::Indeterminate;
  return counter_model ? Verdict::Invalid : Verdict::Valid;
}

std::string SyllogisticForm::name() const {
  std::string n;
  n += to_char(major);
  n += to_char(minor);
  n += to_char(conclusion);
  n += '-';
  n += static_cast<char>('0' + figure);
  return n;
}

SyllogismStructure instantiate_form(const SyllogisticForm& form,
                                    const TermId& minor_term,
                                    const TermId& major_term,
                                    const TermId& middle_term) {
  if (form.figure < 1 || form.figure > 4) {
    throw std::invalid_argument("figure must be 1..4");
  }
  const TermId &S = minor_term, &P = major_term, &M = middle_term;
  SyllogismStructure s;
  switch (form.figure) {
    case 1:
      s.premise1 = {form.major, M, P};
      s.premise2 = {form.minor, S, M};
      break;
    case 2:
      s.premise1 = {form.major, P, M};
      s.premise2 = {form.minor, S, M};
      break;
    case 3:
      s.premise1 = {form.major, M, P};
      s.premise2 = {form.minor, M, S};
      break;
    case 4:
      s.premise1 = {form.major, P, M};
      s.premise2 = {form.minor, M, S};
      break;
  }
  s.conclusion = {form.conclusion, S, P};
  // Terms in first-appearance order across premise1, premise2, conclusion.
  std::vector<TermId> order;
  for (const Proposition* p : {&s.premise1, &s.premise2, &s.conclusion}) {
    for (const TermId* t : {&p->subject, &p->predicate}) {
      if (std::find(order.begin(), order.end(), *t) == order.end()) {
        order.push_back(*t);
      }
    }
  }
  std::copy(order.begin(), order.end(), s.terms.begin());
  check_well_formed(s);
  return s;
}

std::optional<SyllogisticForm> identify_form(const SyllogismStructure& s) {
  try {
    check_well_formed(s);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  const TermId& S = s.conclusion.subject;
  const TermId& P = s.conclusion.predicate;

  auto mentions = [](const Proposition& p, const TermId& t) {
    return p.subject == t || p.predicate == t;
  };
  // The major premise is the one containing the conclusion's predicate.
  const Proposition* major = nullptr;
  const Proposition* minor = nullptr;
  if (mentions(s.premise1, P) && mentions(s.premise2, S) &&
      !mentions(s.premise1, S) && !mentions(s.premise2, P)) {
    major = &s.premise1;
    minor = &s.premise2;
  } else if (mentions(s.premise2, P) && mentions(s.premise1, S) &&
             !mentions(s.premise2, S) && !mentions(s.premise1, P)) {
    major = &s.premise2;
    minor = &s.premise1;
  } else {
    return std::nullopt;
  }

  TermId middle;
  for (const TermId& t : s.terms) {
    if (t != S && t != P) middle = t;
  }
  if (!mentions(*major, middle) || !mentions(*minor, middle)) return std::nullopt;

  SyllogisticForm f;
  f.major = major->type;
  f.minor = minor->type;
  f.conclusion = s.conclusion.type;
  const bool major_mp = major->subject == middle;   // M-P vs P-M
  const bool minor_sm = minor->subject == S;        // S-M vs M-S
  if (major_mp && minor_sm) f.figure = 1;
  else if (!major_mp && minor_sm) f.figure = 2;
  else if (major_mp && !minor_sm) f.figure = 3;
  else f.figure = 4;
  return f;
}

std::vector<FormVerdict> enumerate_forms(SemanticsMode mode) {
  static constexpr PropositionType kTypes[4] = {
      PropositionType::A, PropositionType::E, PropositionType::I,
      PropositionType::O};
  std::vector<FormVerdict> out;
  out.reserve(256);
  for (int fig = 1; fig <= 4; ++fig) {
    for (PropositionType maj : kTypes) {
      for (PropositionType min : kTypes) {
        for (PropositionType con : kTypes) {
          SyllogisticForm form{maj, min, con, fig};
          SyllogismStructure s = instantiate_form(form, "s", "p", "m");
          out.push_back({form, decide_validity(s, mode)});
        }
      }
    }
  }
  return out;
}

namespace {

std::string smt_symbol(const TermId& t) {
  // Quote every predicate symbol; term ids may contain spaces.
  std::string s = "|";
  for (char c : t) {
    s += (c == '|' || c == '\\') ? '_' : c;
  }
  s += "|";
  return s;
}

std::string smt_proposition(const Proposition& p, SemanticsMode mode,
                            const std::string& var) {
  const std::string sub = smt_symbol(p.subject) + " " + var;
  const std::string pred = smt_symbol(p.predicate) + " " + var;
  std::string body;
  switch (p.type) {
    case PropositionType::A:
      body = "(forall ((" + var + " Thing)) (=> (" + sub + ") (" + pred + ")))";
      break;
    case PropositionType::E:
      body = "(forall ((" + var + " Thing)) (=> (" + sub + ") (not (" + pred + "))))";
      break;
    case PropositionType::I:
      body = "(exists ((" + var + " Thing)) (and (" + sub + ") (" + pred + ")))";
      break;
    case PropositionType::O:
      body = "(exists ((" + var + " Thing)) (and (" + sub + ") (not (" + pred + "))))";
      break;
  }
  if (mode == SemanticsMode::SubjectImport && is_universal(p.type)) {
    body = "(and " + body + " (exists ((" + var + " Thing)) (" + sub + ")))";
  }
  return body;
}

}  // namespace

std::string emit_smtlib(const SyllogismStructure& s, SemanticsMode mode,
                        SmtCheck check) {
  check_well_formed(s);
  std::ostringstream out;
  out << "(set-logic UF)\n";
  out << "(declare-sort Thing 0)\n";
  for (const TermId& t : s.terms) {
    out << "(declare-fun " << smt_symbol(t) << " (Thing) Bool)\n";
  }
  if (mode == SemanticsMode::AllTermsNonempty) {
    for (const TermId& t : s.terms) {
      out << "(assert (exists ((x Thing)) (" << smt_symbol(t) << " x)))\n";
    }
  }
  out << "(assert " << smt_proposition(s.premise1, mode, "x") << ")\n";
  out << "(assert " << smt_proposition(s.premise2, mode, "x") << ")\n";
  if (check == SmtCheck::Entailment) {
    // The conclusion is denied on its Boolean reading; under subject-import
    // semantics its presupposition is asserted separately so the script
    // still distinguishes "false" from "vacuous".
    if (mode == SemanticsMode::SubjectImport && is_universal(s.conclusion.type)) {
      out << "(assert (exists ((x Thing)) (" << smt_symbol(s.conclusion.subject)
          << " x)))\n";
    }
    out << "(assert (not "
        << smt_proposition(s.conclusion, SemanticsMode::Boolean, "x") << "))\n";
  }
  out << "(check-sat)\n";
  return out.str();
}

}  // namespace syllo
