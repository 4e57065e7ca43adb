// Typographical rule configuration and the realization table: for a
// dictionary-side diacritic cluster in context, which text-side spellings
// the active ruleset tolerates.

#ifndef OTDL_RULES_HPP
#define OTDL_RULES_HPP

#include "otdl/alphabet.hpp"

#include <array>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace otdl {

enum class Rule : std::size_t {
  FathaOmission,
  DammaOmission,
  KasraOmission,
  SukunOmission,
  SuperscriptAlefOmission,
  FathatanOmissionAtEnd,
  DammatanOmissionAtEnd,
  KasratanOmissionAtEnd,
  ShaddaFathaOmissionAtEnd,
  ShaddaDammaOmissionAtEnd,
  ShaddaKasraOmissionAtEnd,
  ShaddaFathatanOmissionAtEnd,
  ShaddaDammatanOmissionAtEnd,
  ShaddaKasratanOmissionAtEnd,
  ShaddaFathaOmission,
  ShaddaDammaOmission,
  ShaddaKasraOmission,
  ShaddaSuperscriptAlefOmission,
  SolarAssimilation,
  LunarAssimilation,
  AlWithWasla,
  AlefHamzaAboveO,
  AlefHamzaBelowIToA,
  AlefHamzaBelowIToL,
  FathatanAlefEquiv,
  FathatanAlefMaqsuraEquiv,
  Count_,
};

inline constexpr std::size_t kRuleCount = static_cast<std::size_t>(Rule::Count_);

inline const std::array<std::string_view, kRuleCount>& rule_names() {
  static const std::array<std::string_view, kRuleCount> names = {
      "fatha omission",
      "damma omission",
      "kasra omission",
      "sukun omission",
      "superscript alef omission",
      "fathatan omission at end",
      "dammatan omission at end",
      "kasratan omission at end",
      "shadda fatha omission at end",
      "shadda damma omission at end",
      "shadda kasra omission at end",
      "shadda fathatan omission at end",
      "shadda dammatan omission at end",
      "shadda kasratan omission at end",
      "shadda fatha omission",
      "shadda damma omission",
      "shadda kasra omission",
      "shadda superscript alef omission",
      "solar assimilation",
      "lunar assimilation",
      "Al with wasla",
      "alef hamza above O",
      "alef hamza below I to A",
      "alef hamza below I to L",
      "fathatan alef equiv alef fathatan",
      "fathatan alef maqsura equiv alef maqsura fathatan",
  };
  return names;
}

inline std::optional<Rule> rule_by_name(std::string_view name) {
  const auto& names = rule_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Rule>(i);
  // spelling variants seen in circulating copies of the rule file
  if (name == "alef hamza above O to A") return Rule::AlefHamzaAboveO;
  if (name == "shadda dammatar omission at end")
    return Rule::ShaddaDammatanOmissionAtEnd;
  return std::nullopt;
}

struct TypoRuleSet {
  std::array<bool, kRuleCount> on{}; // everything defaults to NO

  bool get(Rule r) const { return on[static_cast<std::size_t>(r)]; }
  void set(Rule r, bool v) { on[static_cast<std::size_t>(r)] = v; }

  bool operator==(const TypoRuleSet&) const = default;

  std::uint64_t fingerprint() const {
    std::uint64_t h = 0;
    for (bool b : on) h = h * 2 + (b ? 1 : 0);
    return h;
  }
};

struct RuleDiagnostic {
  enum Kind { UnknownRuleName, MalformedLine };
  Kind kind;
  std::size_t line = 0;
  std::string message;
};

/// Lines "name=YES|NO"; '/' starts a comment; unmentioned rules stay NO.
inline TypoRuleSet parse_rules(std::istream& in,
                               std::vector<RuleDiagnostic>* diags = nullptr) {
  TypoRuleSet rs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (auto slash = body.find('/'); slash != std::string_view::npos)
      body = body.substr(0, slash);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\t' ||
                             body.back() == '\r'))
      body.remove_suffix(1);
    while (!body.empty() && (body.front() == ' ' || body.front() == '\t'))
      body.remove_prefix(1);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      if (diags)
        diags->push_back({RuleDiagnostic::MalformedLine, lineno, "missing '='"});
      continue;
    }
    std::string_view name = body.substr(0, eq);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    std::string_view value = body.substr(eq + 1);
    while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    bool yes;
    if (value == "YES") yes = true;
    else if (value == "NO") yes = false;
    else {
      if (diags)
        diags->push_back({RuleDiagnostic::MalformedLine, lineno,
                          "value must be YES or NO"});
      continue;
    }
    auto r = rule_by_name(name);
    if (!r) {
      if (diags)
        diags->push_back({RuleDiagnostic::UnknownRuleName, lineno,
                          "unknown rule '" + std::string(name) + "'"});
      continue;
    }
    rs.set(*r, yes);
  }
  return rs;
}

inline TypoRuleSet load_rules(const std::string& path,
                              std::vector<RuleDiagnostic>* diags = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open rule file: " + path);
  return parse_rules(in, diags);
}

/// The shipped configuration: everything YES except lunar assimilation.
inline TypoRuleSet default_rules() {
  TypoRuleSet rs;
  rs.on.fill(true);
  rs.set(Rule::LunarAssimilation, false);
  return rs;
}

namespace detail {

inline std::optional<Rule> vowel_omission_rule(char v) {
  switch (v) {
  case 'a': return Rule::FathaOmission;
  case 'u': return Rule::DammaOmission;
  case 'i': return Rule::KasraOmission;
  case 'o': return Rule::SukunOmission;
  default: return std::nullopt;
  }
}

inline std::optional<Rule> nunation_omission_rule(char n) {
  switch (n) {
  case 'F': return Rule::FathatanOmissionAtEnd;
  case 'N': return Rule::DammatanOmissionAtEnd;
  case 'K': return Rule::KasratanOmissionAtEnd;
  default: return std::nullopt;
  }
}

inline std::optional<Rule> shadda_vowel_rule(char v, bool at_end) {
  switch (v) {
  case 'a': return at_end ? Rule::ShaddaFathaOmissionAtEnd : Rule::ShaddaFathaOmission;
  case 'u': return at_end ? Rule::ShaddaDammaOmissionAtEnd : Rule::ShaddaDammaOmission;
  case 'i': return at_end ? Rule::ShaddaKasraOmissionAtEnd : Rule::ShaddaKasraOmission;
  default: return std::nullopt;
  }
}

inline std::optional<Rule> shadda_nunation_rule(char n) {
  switch (n) {
  case 'F': return Rule::ShaddaFathatanOmissionAtEnd;
  case 'N': return Rule::ShaddaDammatanOmissionAtEnd;
  case 'K': return Rule::ShaddaKasratanOmissionAtEnd;
  default: return std::nullopt;
  }
}

} // namespace detail

struct RulePosition {
  bool word_start = false;      // first character of the core segment
  bool word_end = false;        // cluster closes the segment
  bool after_determiner = false; // first core letter following "Al"
  bool determiner_start = false; // first letter of the determiner itself
};

/// Text-side spellings a dictionary cluster may take.  The identity
/// spelling is always first; dict_seq is a maximal diacritic cluster, a
/// word-end nunation-alef pair, or a single bare letter.
inline std::vector<std::string> realizations(const TypoRuleSet& rs,
                                             std::string_view dict_seq,
                                             RulePosition pos = {}) {
  std::vector<std::string> out;
  out.emplace_back(dict_seq);
  auto add = [&](std::string s) {
    for (const auto& have : out)
      if (have == s) return;
    out.push_back(std::move(s));
  };

  if (dict_seq.size() == 1) {
    char c = dict_seq[0];
    if (auto r = detail::vowel_omission_rule(c); r && rs.get(*r)) add("");
    if (c == 'R' && rs.get(Rule::SuperscriptAlefOmission)) add("");
    if (is_nunation(c) && pos.word_end) {
      if (auto r = detail::nunation_omission_rule(c); r && rs.get(*r)) add("");
    }
    if (c == 'O' && pos.word_start && rs.get(Rule::AlefHamzaAboveO)) add("A");
    if (c == 'I' && pos.word_start) {
      if (rs.get(Rule::AlefHamzaBelowIToA)) add("A");
      if (rs.get(Rule::AlefHamzaBelowIToL)) add("L");
    }
    if (c == 'A' && pos.determiner_start && rs.get(Rule::AlWithWasla)) add("L");
    if (pos.after_determiner && is_tbpp_letter(c) && !is_diacritic(c)) {
      // text may mark assimilation of the determiner's l with an extra G
      bool allowed = is_coronal(c) ? rs.get(Rule::SolarAssimilation)
                                   : rs.get(Rule::LunarAssimilation);
      if (allowed) add(std::string(1, c) + "G");
    }
    return out;
  }

  if (dict_seq.size() == 2 && dict_seq[0] == 'G') {
    char m = dict_seq[1];
    if (is_short_vowel(m) || m == 'o') {
      // vowel alone with the G dropped is never a valid spelling
      if (auto r = detail::vowel_omission_rule(m); r && rs.get(*r)) add("G");
      bool eps = false;
      if (auto r = detail::shadda_vowel_rule(m, false); r && rs.get(*r)) eps = true;
      if (pos.word_end)
        if (auto r = detail::shadda_vowel_rule(m, true); r && rs.get(*r)) eps = true;
      if (eps) add("");
    } else if (is_nunation(m) && pos.word_end) {
      if (auto r = detail::nunation_omission_rule(m); r && rs.get(*r)) add("G");
      if (auto r = detail::shadda_nunation_rule(m); r && rs.get(*r)) add("");
    } else if (m == 'R') {
      if (rs.get(Rule::SuperscriptAlefOmission)) add("G");
      if (rs.get(Rule::ShaddaSuperscriptAlefOmission)) add("");
    }
    return out;
  }

  if (dict_seq.size() == 2 && pos.word_end) {
    // word-final nunation next to its silent seat letter
    char a = dict_seq[0], b = dict_seq[1];
    if ((a == 'F' && (b == 'A' || b == 'Y')) ||
        (b == 'F' && (a == 'A' || a == 'Y'))) {
      char seat = (a == 'F') ? b : a;
      Rule equiv = (seat == 'A') ? Rule::FathatanAlefEquiv
                                 : Rule::FathatanAlefMaqsuraEquiv;
      if (rs.get(equiv)) add(std::string(1, b) + std::string(1, a));
      if (rs.get(Rule::FathatanOmissionAtEnd)) add(std::string(1, seat));
    }
  }
  return out;
}

struct SurfaceCluster {
  std::string seq;
  RulePosition pos;
};

/// Splits a dictionary surface into the maximal clusters the realization
/// table is defined on.
inline std::vector<SurfaceCluster> decompose_surface(std::string_view surface) {
  std::vector<SurfaceCluster> out;
  std::size_t i = 0;
  const std::size_t n = surface.size();
  while (i < n) {
    SurfaceCluster c;
    c.pos.word_start = (i == 0);
    char a = surface[i];
    std::size_t len = 1;
    if (a == 'G' && i + 1 < n && is_diacritic(surface[i + 1]) &&
        surface[i + 1] != 'G') {
      len = 2;
    } else if (i + 2 == n) {
      char b = surface[i + 1 < n ? i + 1 : i];
      if ((a == 'F' && (b == 'A' || b == 'Y')) ||
          (b == 'F' && (a == 'A' || a == 'Y')))
        len = 2;
    }
    c.seq.assign(surface.substr(i, len));
    i += len;
    c.pos.word_end = (i == n);
    out.push_back(std::move(c));
  }
  return out;
}

} // namespace otdl

#endif // OTDL_RULES_HPP
