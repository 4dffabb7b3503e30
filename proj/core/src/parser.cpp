#include "syllo/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <sstream>
#include <vector>

namespace syllo {

const char* to_string(ParseFailure f) {
  switch (f) {
    case ParseFailure::NoConclusionMarker: return "no-conclusion-marker";
    case ParseFailure::UnrecognizedQuantifier: return "unrecognized-quantifier";
    case ParseFailure::TermMismatch: return "term-mismatch";
    case ParseFailure::SentenceCount: return "sentence-count";
  }
  return "?";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool in_space = true;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space && !out.empty()) out += ' ';
      in_space = true;
    } else {
      out += c;
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> toks;
  std::istringstream in(s);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string singularize(std::string token) {
  const auto n = token.size();
  if (n > 4 && ends_with(token, "ies")) {
    token.replace(n - 3, 3, "y");
  } else if (n > 4 && (ends_with(token, "xes") || ends_with(token, "ches") ||
                       ends_with(token, "shes") || ends_with(token, "zes") ||
                       ends_with(token, "sses"))) {
    token.erase(token.size() - 2);
  } else if (n > 3 && token.back() == 's' && !ends_with(token, "ss") &&
             !ends_with(token, "us") && !ends_with(token, "is")) {
    token.pop_back();
  }
  return token;
}

bool is_article(const std::string& t) { return t == "a" || t == "an" || t == "the"; }
bool is_relativizer(const std::string& t) {
  return t == "that" || t == "who" || t == "which";
}
bool is_copula_word(const std::string& t) { return t == "is" || t == "are"; }
bool is_filler(const std::string& t) {
  return t == "thing" || t == "things" || t == "single";
}

}  // namespace

TermId normalize_term(std::string_view raw) {
  std::string s = collapse_ws(lower(raw));
  while (!s.empty() && !word_char(s.front())) s.erase(s.begin());
  while (!s.empty() && !word_char(s.back())) s.pop_back();

  std::vector<std::string> toks = split_tokens(s);
  // Leading articles, fillers, and relativizer prefixes ("that are ...").
  // Fillers must be stripped inside the loop too, or "things that are red"
  // never exposes its relativizer.
  bool changed = true;
  while (changed && !toks.empty()) {
    changed = false;
    if (is_article(toks.front()) || is_filler(toks.front())) {
      toks.erase(toks.begin());
      changed = true;
    } else if (toks.size() >= 2 && is_relativizer(toks[0]) && is_copula_word(toks[1])) {
      toks.erase(toks.begin(), toks.begin() + 2);
      changed = true;
    }
  }
  std::erase_if(toks, is_filler);
  if (toks.empty()) return "";
  toks.back() = singularize(toks.back());

  std::string out;
  for (const auto& t : toks) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

namespace {

constexpr std::string_view kMarkers[] = {"therefore", "hence", "thus",
                                         "consequently", "so"};

// First whole-word occurrence of any conclusion marker, by text position.
std::optional<std::pair<std::size_t, std::size_t>> find_marker(const std::string& text) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::string_view m : kMarkers) {
    std::size_t from = 0;
    while (true) {
      std::size_t pos = text.find(m, from);
      if (pos == std::string::npos) break;
      const bool left_ok = pos == 0 || !word_char(text[pos - 1]);
      const std::size_t end = pos + m.size();
      const bool right_ok = end >= text.size() || !word_char(text[end]);
      if (left_ok && right_ok) {
        if (!best || pos < best->first) best = {pos, m.size()};
        break;
      }
      from = pos + 1;
    }
  }
  return best;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '.' || c == ';' || c == '!' || c == '?') {
      std::string t = collapse_ws(cur);
      if (!t.empty()) out.push_back(std::move(t));
      cur.clear();
    } else {
      cur += c;
    }
  }
  std::string t = collapse_ws(cur);
  if (!t.empty()) out.push_back(std::move(t));
  return out;
}

}  // namespace

std::variant<SentenceSplit, ParseFailure> split_and_find_conclusion(std::string_view text) {
  const std::string lowered = lower(text);
  const auto marker = find_marker(lowered);
  if (!marker) return ParseFailure::NoConclusionMarker;

  const std::string before = lowered.substr(0, marker->first);
  std::string after = lowered.substr(marker->first + marker->second);

  // Leading separators after the marker.
  std::size_t i = 0;
  while (i < after.size() &&
         (after[i] == ',' || after[i] == ':' ||
          std::isspace(static_cast<unsigned char>(after[i])))) {
    ++i;
  }
  after.erase(0, i);

  std::vector<std::string> tail = split_sentences(after);
  if (tail.size() != 1) return ParseFailure::SentenceCount;

  std::vector<std::string> premises = split_sentences(before);
  if (premises.size() != 2) return ParseFailure::SentenceCount;

  return SentenceSplit{premises[0], premises[1], tail[0]};
}

namespace {

struct CopulaSplit {
  std::string subject;
  std::string predicate;
};

// Earliest occurrence of a copula wins; "belong(s) to the class of" is
// dropped, "are"/"is" leave any following phrase ("made of glass") inside
// the predicate.
std::optional<CopulaSplit> split_copula(const std::string& clause) {
  static constexpr std::string_view kCopulas[] = {
      " belong to the class of ", " belongs to the class of ", " are ", " is "};
  std::size_t best_pos = std::string::npos;
  std::string_view best;
  for (std::string_view c : kCopulas) {
    std::size_t pos = clause.find(c);
    if (pos != std::string::npos && pos < best_pos) {
      best_pos = pos;
      best = c;
    }
  }
  if (best_pos == std::string::npos) return std::nullopt;
  return CopulaSplit{clause.substr(0, best_pos),
                     clause.substr(best_pos + best.size())};
}

std::variant<Proposition, ParseFailure> make_prop(PropositionType t,
                                                  std::string_view subj_raw,
                                                  std::string_view pred_raw) {
  Proposition p;
  p.type = t;
  p.subject = normalize_term(subj_raw);
  p.predicate = normalize_term(pred_raw);
  if (p.subject.empty() || p.predicate.empty()) {
    return ParseFailure::UnrecognizedQuantifier;
  }
  return p;
}

bool strip_prefix(std::string& s, std::string_view prefix) {
  if (s.rfind(prefix, 0) == 0) {
    s.erase(0, prefix.size());
    return true;
  }
  return false;
}

}  // namespace

std::variant<Proposition, ParseFailure> classify_proposition(std::string_view clause) {
  const std::string c = collapse_ws(lower(clause));
  std::smatch m;

  // "There are no S that are not P" reads as a universal affirmative;
  // its single-negation sibling is a universal negative.
  static const std::regex double_neg(
      R"(^there (?:are|is) no (.+?) (?:that|who|which) (?:are|is) not (.+)$)");
  if (std::regex_match(c, m, double_neg)) {
    return make_prop(PropositionType::A, m[1].str(), m[2].str());
  }
  static const std::regex there_no(
      R"(^there (?:are|is) no (.+?) (?:that|who|which) (?:are|is) (.+)$)");
  if (std::regex_match(c, m, there_no)) {
    return make_prop(PropositionType::E, m[1].str(), m[2].str());
  }
  static const std::regex no_circumstances(
      R"(^under no circumstances (?:is|are) (?:a|an) (.+?) (?:a|an) (.+)$)");
  if (std::regex_match(c, m, no_circumstances)) {
    return make_prop(PropositionType::E, m[1].str(), m[2].str());
  }
  static const std::regex anything_that(
      R"(^(?:anything|everything|anyone|everyone) (?:that|who|which) is (.+?) is (.+)$)");
  if (std::regex_match(c, m, anything_that)) {
    return make_prop(PropositionType::A, m[1].str(), m[2].str());
  }

  std::string rest = c;
  if (strip_prefix(rest, "none of the ") || strip_prefix(rest, "none of ") ||
      strip_prefix(rest, "no ")) {
    auto split = split_copula(rest);
    if (!split) return ParseFailure::UnrecognizedQuantifier;
    if (split->predicate.rfind("not ", 0) == 0) {
      return ParseFailure::UnrecognizedQuantifier;
    }
    return make_prop(PropositionType::E, split->subject, split->predicate);
  }

  rest = c;
  if (strip_prefix(rest, "all ") || strip_prefix(rest, "every ") ||
      strip_prefix(rest, "any ") || strip_prefix(rest, "each ")) {
    auto split = split_copula(rest);
    if (!split) return ParseFailure::UnrecognizedQuantifier;
    if (split->predicate.rfind("not ", 0) == 0) {
      return ParseFailure::UnrecognizedQuantifier;
    }
    return make_prop(PropositionType::A, split->subject, split->predicate);
  }

  rest = c;
  if (strip_prefix(rest, "some ") || strip_prefix(rest, "at least one ")) {
    static const std::regex not_class(
        R"(^(.+?) do(?:es)? not belong to the class of (.+)$)");
    if (std::regex_match(rest, m, not_class)) {
      return make_prop(PropositionType::O, m[1].str(), m[2].str());
    }
    auto split = split_copula(rest);
    if (!split) return ParseFailure::UnrecognizedQuantifier;
    std::string pred = split->predicate;
    if (strip_prefix(pred, "not ")) {
      return make_prop(PropositionType::O, split->subject, pred);
    }
    return make_prop(PropositionType::I, split->subject, pred);
  }

  return ParseFailure::UnrecognizedQuantifier;
}

ParseResult parse_syllogism(std::string_view text) {
  auto split = split_and_find_conclusion(text);
  if (std::holds_alternative<ParseFailure>(split)) {
    return {std::nullopt, std::get<ParseFailure>(split)};
  }
  const auto& sentences = std::get<SentenceSplit>(split);

  std::array<Proposition, 3> props;
  const std::array<const std::string*, 3> clauses{
      &sentences.premise1, &sentences.premise2, &sentences.conclusion};
  for (std::size_t i = 0; i < 3; ++i) {
    auto r = classify_proposition(*clauses[i]);
    if (std::holds_alternative<ParseFailure>(r)) {
      return {std::nullopt, std::get<ParseFailure>(r)};
    }
    props[i] = std::get<Proposition>(r);
  }

  std::vector<TermId> order;
  for (const Proposition& p : props) {
    for (const TermId* t : {&p.subject, &p.predicate}) {
      if (std::find(order.begin(), order.end(), *t) == order.end()) {
        order.push_back(*t);
      }
    }
    if (p.subject == p.predicate) return {std::nullopt, ParseFailure::TermMismatch};
  }
  if (order.size() != 3) return {std::nullopt, ParseFailure::TermMismatch};

  SyllogismStructure s;
  std::copy(order.begin(), order.end(), s.terms.begin());
  s.premise1 = props[0];
  s.premise2 = props[1];
  s.conclusion = props[2];
  return {s, std::nullopt};
}

}  // namespace syllo
