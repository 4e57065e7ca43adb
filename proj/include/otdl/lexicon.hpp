// Flat full-form dictionary lines, the tagset, and lexical-mask matching.
//
// Entry format, one per line:
//   surface,lemma.POS[+feat]*[:code[:code]*]
// '/' starts a comment running to end of line; blank lines are ignored.

#ifndef OTDL_LEXICON_HPP
#define OTDL_LEXICON_HPP

#include "otdl/alphabet.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace otdl {

struct ParseDiagnostic {
  enum Kind { MalformedEntry, UnknownPos, UnknownFeatureChar, MalformedMask };
  Kind kind;
  std::size_t line = 0;
  std::string message;
};

inline const std::vector<std::string>& known_pos_tags() {
  static const std::vector<std::string> tags = {
      "V",    "N",     "NPr",   "A",    "EL",  "ADV",  "PREP", "PRO",
      "CONJC", "CONJS", "INTJ", "DET",  "INNA", "PRTCL"};
  return tags;
}

/// Feature characters a code may carry for the given POS (Tables 5.1b).
inline std::string_view feature_chars_for(std::string_view pos) {
  if (pos == "V") return "mfsdpabPIYFMNSJE123DiAG";
  if (pos == "N" || pos == "A" || pos == "NPr" || pos == "EL" || pos == "ADV")
    return "mfsdpqDaiNAG";
  if (pos == "PRO") return "mfsdp123";
  return ""; // closed classes carry no inflectional codes
}

struct DictEntry {
  std::string surface;
  std::string lemma;
  std::string pos;
  std::vector<std::string> sem_features; // without the leading '+'
  std::vector<std::string> infl_codes;
  std::size_t line = 0;

  bool has_sem(std::string_view f) const {
    return std::find(sem_features.begin(), sem_features.end(), f) !=
           sem_features.end();
  }

  /// ".POS[+feat]*[:code]*" as it appears after the lemma in the flat file.
  std::string annotation() const {
    std::string a = "." + pos;
    for (const auto& f : sem_features) a += "+" + f;
    for (const auto& c : infl_codes) a += ":" + c;
    return a;
  }

  std::string render() const { return surface + "," + lemma + annotation(); }

  bool operator==(const DictEntry& o) const {
    return surface == o.surface && lemma == o.lemma && pos == o.pos &&
           sem_features == o.sem_features && infl_codes == o.infl_codes;
  }
};

namespace detail {

// Splits "POS[+feat]*[:code]*" (the part after '.').  Returns false on
// structural failure.
inline bool parse_annotation(std::string_view text, std::string& pos,
                             std::vector<std::string>& sem,
                             std::vector<std::string>& codes) {
  std::size_t colon = text.find(':');
  std::string_view head = text.substr(0, colon);
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      std::size_t next = rest.find(':');
      codes.emplace_back(rest.substr(0, next));
      if (next == std::string_view::npos) break;
      rest.remove_prefix(next + 1);
    }
    if (codes.empty() || std::any_of(codes.begin(), codes.end(),
                                     [](const std::string& c) { return c.empty(); }))
      return false;
  }
  std::size_t plus = head.find('+');
  pos = std::string(head.substr(0, plus));
  if (pos.empty()) return false;
  while (plus != std::string_view::npos) {
    head.remove_prefix(plus + 1);
    plus = head.find('+');
    std::string f(head.substr(0, plus));
    if (f.empty()) return false;
    sem.push_back(std::move(f));
  }
  return true;
}

inline std::string_view strip_comment(std::string_view line) {
  std::size_t slash = line.find('/');
  if (slash != std::string_view::npos) line = line.substr(0, slash);
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                           line.back() == '\r'))
    line.remove_suffix(1);
  while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
    line.remove_prefix(1);
  return line;
}

} // namespace detail

/// Parses one dictionary line.  Comments and blank lines yield nullopt with
/// no diagnostic; malformed lines yield nullopt and a diagnostic.
inline std::optional<DictEntry>
parse_entry(std::string_view line, std::size_t lineno,
            std::vector<ParseDiagnostic>* diags = nullptr) {
  auto fail = [&](ParseDiagnostic::Kind k, std::string msg) -> std::optional<DictEntry> {
    if (diags) diags->push_back({k, lineno, std::move(msg)});
    return std::nullopt;
  };
  std::string_view body = detail::strip_comment(line);
  if (body.empty()) return std::nullopt;

  std::size_t comma = body.find(',');
  if (comma == std::string_view::npos)
    return fail(ParseDiagnostic::MalformedEntry, "missing ','");
  std::size_t dot = body.find('.', comma + 1);
  if (dot == std::string_view::npos)
    return fail(ParseDiagnostic::MalformedEntry, "missing '.'");

  DictEntry e;
  e.line = lineno;
  e.surface = std::string(body.substr(0, comma));
  e.lemma = std::string(body.substr(comma + 1, dot - comma - 1));
  if (e.surface.empty() || e.lemma.empty())
    return fail(ParseDiagnostic::MalformedEntry, "empty surface or lemma");
  for (char c : e.surface)
    if (!is_tbpp_letter(c) && !is_diacritic(c))
      return fail(ParseDiagnostic::MalformedEntry,
                  std::string("invalid surface character '") + c + "'");

  if (!detail::parse_annotation(body.substr(dot + 1), e.pos, e.sem_features,
                                e.infl_codes))
    return fail(ParseDiagnostic::MalformedEntry, "malformed annotation");

  const auto& tags = known_pos_tags();
  if (std::find(tags.begin(), tags.end(), e.pos) == tags.end())
    return fail(ParseDiagnostic::UnknownPos, "unknown POS '" + e.pos + "'");

  std::string_view allowed = feature_chars_for(e.pos);
  for (const auto& code : e.infl_codes)
    for (char c : code)
      if (allowed.find(c) == std::string_view::npos)
        return fail(ParseDiagnostic::UnknownFeatureChar,
                    std::string("feature '") + c + "' not valid for " + e.pos);

  if (e.has_sem("pro") && e.has_sem("nopro"))
    return fail(ParseDiagnostic::MalformedEntry, "+pro and +nopro co-occur");
  return e;
}

struct LexicalMask {
  std::optional<std::string> lemma;
  std::string pos;
  std::vector<std::string> sem_features;
  std::vector<std::string> groups; // alternative feature groups

  std::string render() const {
    std::string s = "<";
    if (lemma) s += *lemma + ".";
    s += pos;
    for (const auto& f : sem_features) s += "+" + f;
    for (const auto& g : groups) s += ":" + g;
    return s + ">";
  }
};

/// Parses "<[lemma.]POS[+feat]*[:group]*>".
inline std::optional<LexicalMask>
parse_mask(std::string_view text, std::vector<ParseDiagnostic>* diags = nullptr,
           std::size_t lineno = 0) {
  auto fail = [&](std::string msg) -> std::optional<LexicalMask> {
    if (diags) diags->push_back({ParseDiagnostic::MalformedMask, lineno, std::move(msg)});
    return std::nullopt;
  };
  if (text.size() < 3 || text.front() != '<' || text.back() != '>')
    return fail("mask must be <...>");
  std::string_view body = text.substr(1, text.size() - 2);
  LexicalMask m;
  std::size_t dot = body.find('.');
  if (dot != std::string_view::npos) {
    m.lemma = std::string(body.substr(0, dot));
    body.remove_prefix(dot + 1);
  }
  if (!detail::parse_annotation(body, m.pos, m.sem_features, m.groups))
    return fail("malformed mask body");
  const auto& tags = known_pos_tags();
  if (std::find(tags.begin(), tags.end(), m.pos) == tags.end())
    return fail("unknown POS in mask '" + m.pos + "'");
  return m;
}

/// True iff pos matches, lemma matches when specified, every mask sem
/// feature is on the entry, and some mask group is a character-subset of
/// some entry code.  Order inside a group is not significant.
inline bool mask_matches(const LexicalMask& m, const DictEntry& e) {
  if (m.pos != e.pos) return false;
  if (m.lemma && *m.lemma != e.lemma) return false;
  for (const auto& f : m.sem_features)
    if (!e.has_sem(f)) return false;
  if (m.groups.empty()) return true;
  for (const auto& g : m.groups) {
    for (const auto& code : e.infl_codes) {
      bool subset = true;
      for (char c : g)
        if (code.find(c) == std::string::npos) { subset = false; break; }
      if (subset) return true;
    }
  }
  return false;
}

struct FlatDictionary {
  std::vector<DictEntry> entries;
  std::vector<ParseDiagnostic> diagnostics;
};

inline FlatDictionary parse_flat(std::istream& in) {
  FlatDictionary d;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto e = parse_entry(line, lineno, &d.diagnostics);
    if (!e) continue;
    // identical duplicate lines collapse; homographs are kept
    if (seen.insert(e->render()).second) d.entries.push_back(std::move(*e));
  }
  return d;
}

inline FlatDictionary load_flat(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dictionary: " + path);
  return parse_flat(in);
}

} // namespace otdl

#endif // OTDL_LEXICON_HPP
