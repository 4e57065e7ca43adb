// Omission-tolerant lookup: matches text tokens against the compiled
// dictionary under a ruleset, composes with the agglutination grammar to
// segment clitics, restores vowels, memoizes per token, and classifies
// unknown tokens for spell checking.

#ifndef OTDL_LOOKUP_HPP
#define OTDL_LOOKUP_HPP

#include "otdl/madfa.hpp"
#include "otdl/morphgraph.hpp"
#include "otdl/rules.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace otdl {

struct MatchContext {
  bool after_determiner = false; // first core letter may carry inserted G
  bool determiner_start = false; // wasla alef may replace the alef of Al
};

struct PrefixMatch {
  std::size_t len = 0;        // token characters consumed
  std::string restored;       // matched dictionary surface
  std::vector<std::uint32_t> inf;

  bool operator<(const PrefixMatch& o) const {
    if (len != o.len) return len < o.len;
    return restored < o.restored;
  }
};

namespace detail {

// Synchronized traversal of (token position, automaton state).  Clusters
// on the dictionary side branch into their rule-licensed text spellings;
// variants that only exist word-finally stop the traversal at the cluster.
class Matcher {
public:
  Matcher(const Madfa& m, const TypoRuleSet& rs, std::string_view token,
          MatchContext ctx)
      : m_(m), rs_(rs), token_(token), ctx_(ctx) {}

  std::vector<PrefixMatch> run() {
    path_.clear();
    seen_.clear();
    out_.clear();
    dfs(m_.initial, 0);
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

private:
  void record(std::uint32_t s, std::size_t tp) {
    if (!m_.states[s].final) return;
    if (!seen_.emplace(path_, tp).second) return;
    out_.push_back({tp, path_, m_.states[s].inf});
  }

  RulePosition position(bool word_end) const {
    RulePosition p;
    p.word_start = path_.empty();
    p.word_end = word_end;
    p.after_determiner = ctx_.after_determiner && path_.empty();
    p.determiner_start = ctx_.determiner_start && path_.empty();
    return p;
  }

  void try_cluster(std::string_view seq, std::uint32_t target, std::size_t tp) {
    auto base = realizations(rs_, seq, position(false));
    auto ends = realizations(rs_, seq, position(true));
    path_.append(seq);
    for (const auto& v : base) {
      if (token_.compare(tp, v.size(), v) == 0) dfs(target, tp + v.size());
    }
    for (const auto& v : ends) {
      if (std::find(base.begin(), base.end(), v) != base.end()) continue;
      if (token_.compare(tp, v.size(), v) == 0) record(target, tp + v.size());
    }
    path_.resize(path_.size() - seq.size());
  }

  void dfs(std::uint32_t s, std::size_t tp) {
    record(s, tp);
    for (const auto& [c, ns] : m_.states[s].trans) {
      char pair[2] = {c, 0};
      if (c == 'G') {
        // pair clusters carry the shadda-with-vowel rules; the plain step
        // covers merged states whose G also continues into a bare letter
        // (its realizations are a subset of the pair's, deduplicated later)
        for (const auto& [c2, ns2] : m_.states[ns].trans) {
          if (is_diacritic(c2) && c2 != 'G') {
            pair[1] = c2;
            try_cluster(std::string_view(pair, 2), ns2, tp);
          }
        }
        try_cluster(std::string_view(pair, 1), ns, tp);
        continue;
      }
      try_cluster(std::string_view(pair, 1), ns, tp);
      // word-final nunation-and-seat pairs admit inversion
      if (c == 'F' || c == 'A' || c == 'Y') {
        for (const auto& [c2, ns2] : m_.states[ns].trans) {
          bool nun_pair = (c == 'F' && (c2 == 'A' || c2 == 'Y')) ||
                          (c2 == 'F' && (c == 'A' || c == 'Y'));
          if (!nun_pair) continue;
          pair[1] = c2;
          auto base = realizations(rs_, std::string_view(pair, 2), position(false));
          auto ends = realizations(rs_, std::string_view(pair, 2), position(true));
          path_.append(pair, 2);
          for (const auto& v : ends) {
            if (std::find(base.begin(), base.end(), v) != base.end()) continue;
            if (token_.compare(tp, v.size(), v) == 0) record(ns2, tp + v.size());
          }
          path_.resize(path_.size() - 2);
        }
      }
    }
  }

  const Madfa& m_;
  const TypoRuleSet& rs_;
  std::string_view token_;
  MatchContext ctx_;
  std::string path_;
  std::set<std::pair<std::string, std::size_t>> seen_;
  std::vector<PrefixMatch> out_;
};

inline Madfa chain_madfa(std::string_view word) {
  Madfa m;
  m.states.resize(word.size() + 1);
  for (std::size_t i = 0; i < word.size(); ++i)
    m.states[i].trans.emplace_back(word[i], static_cast<std::uint32_t>(i + 1));
  m.states[word.size()].final = true;
  return m;
}

} // namespace detail

/// Dictionary surfaces of which a prefix of the token is a rule-licensed
/// spelling, with the consumed length.
inline std::vector<PrefixMatch>
match_token_prefix(const CompiledDictionary& cd, const TypoRuleSet& rs,
                   std::string_view token, MatchContext ctx = {}) {
  return detail::Matcher(cd.madfa, rs, token, ctx).run();
}

/// Full-token matches, expanded to dictionary entries.
inline std::vector<std::pair<std::string, DictEntry>>
match_token(const CompiledDictionary& cd, const TypoRuleSet& rs,
            std::string_view token, MatchContext ctx = {}) {
  std::vector<std::pair<std::string, DictEntry>> out;
  for (const auto& pm : detail::Matcher(cd.madfa, rs, token, ctx).run()) {
    if (pm.len != token.size()) continue;
    std::vector<DictEntry> entries;
    for (auto idx : pm.inf) cd.append_expanded(pm.restored, idx, entries);
    for (auto& e : entries) out.emplace_back(pm.restored, std::move(e));
  }
  return out;
}

struct Segment {
  std::string written;
  std::string restored;
  std::string lemma;
  std::string pos;
  std::vector<std::string> sem_features;
  std::string code; // colon-joined inflectional codes

  std::string render() const {
    std::string s = written + "." + restored + "." + lemma + "." + pos;
    for (const auto& f : sem_features) s += "+" + f;
    if (!code.empty()) s += ":" + code;
    return s;
  }

  bool operator==(const Segment&) const = default;
};

struct Analysis {
  std::vector<Segment> segments;

  std::string render() const {
    std::string s;
    for (const auto& seg : segments) s += "{" + seg.render() + "}";
    return s;
  }

  bool operator==(const Analysis&) const = default;
};

namespace detail {

inline bool annotation_to_segment(std::string_view annotation, Segment& seg) {
  std::vector<std::string> codes;
  if (!parse_annotation(annotation, seg.pos, seg.sem_features, codes))
    return false;
  for (std::size_t i = 0; i < codes.size(); ++i)
    seg.code += (i ? ":" : "") + codes[i];
  return true;
}

class AggAnalyzer {
public:
  AggAnalyzer(const CompiledDictionary& cd, const TypoRuleSet& rs,
              const MorphGraph& agg, std::string_view token)
      : cd_(cd), rs_(rs), agg_(agg), token_(token) {}

  std::vector<Analysis> run() {
    std::vector<Segment> segs;
    dfs(agg_.initial, 0, segs, false, false, false);
    std::vector<Analysis> out(results_.begin(), results_.end());
    return out;
  }

private:
  struct AnalysisLess {
    bool operator()(const Analysis& a, const Analysis& b) const {
      return a.render() < b.render();
    }
  };

  void dfs(std::uint32_t s, std::size_t tp, std::vector<Segment>& segs,
           bool after_det, bool require_pro, bool forbid_pro) {
    if (agg_.finals[s] && tp == token_.size() && !require_pro)
      results_.insert(Analysis{segs});
    for (auto ti : agg_.adj[s]) {
      const auto& t = agg_.transitions[ti];
      if (t.label.kind == Label::Kind::Literal) {
        if (t.label.text.empty()) { // epsilon from flattening
          dfs(t.to, tp, segs, after_det, require_pro, forbid_pro);
          continue;
        }
        step_literal(t, tp, segs, after_det, require_pro, forbid_pro);
      } else if (t.label.kind == Label::Kind::Mask) {
        step_mask(t, tp, segs, after_det, require_pro, forbid_pro);
      }
    }
  }

  void step_literal(const MorphTransition& t, std::size_t tp,
                    std::vector<Segment>& segs, bool after_det,
                    bool require_pro, bool forbid_pro) {
    Segment seg;
    seg.restored = t.label.text;
    seg.lemma = t.label.text;
    if (!t.output.empty() && !annotation_to_segment(t.output, seg)) return;
    bool is_det = seg.pos == "DET";
    bool is_pro = seg.pos == "PRO";
    if (is_pro && forbid_pro) return;

    Madfa chain = chain_madfa(t.label.text);
    MatchContext ctx;
    ctx.determiner_start = is_det;
    for (const auto& pm : Matcher(chain, rs_, token_.substr(tp), ctx).run()) {
      if (pm.len == 0 && !t.label.text.empty()) continue;
      seg.written = std::string(token_.substr(tp, pm.len));
      segs.push_back(seg);
      dfs(t.to, tp + pm.len, segs, is_det, is_pro ? false : require_pro,
          forbid_pro);
      segs.pop_back();
    }
  }

  void step_mask(const MorphTransition& t, std::size_t tp,
                 std::vector<Segment>& segs, bool after_det, bool require_pro,
                 bool forbid_pro) {
    MatchContext ctx;
    ctx.after_determiner = after_det;
    auto prefixes = match_token_prefix(cd_, rs_, token_.substr(tp), ctx);
    for (const auto& pm : prefixes) {
      if (pm.len == 0) continue;
      std::vector<DictEntry> entries;
      for (auto idx : pm.inf) cd_.append_expanded(pm.restored, idx, entries);
      for (const auto& e : entries) {
        if (!mask_matches(t.label.mask, e)) continue;
        bool is_pro = e.pos == "PRO";
        if (is_pro && forbid_pro) continue;
        Segment seg;
        seg.written = std::string(token_.substr(tp, pm.len));
        seg.restored = pm.restored;
        seg.lemma = e.lemma;
        seg.pos = e.pos;
        seg.sem_features = e.sem_features;
        for (std::size_t i = 0; i < e.infl_codes.size(); ++i)
          seg.code += (i ? ":" : "") + e.infl_codes[i];
        bool next_require = e.has_sem("pro") || (is_pro ? false : require_pro);
        bool next_forbid = forbid_pro || e.has_sem("nopro");
        segs.push_back(std::move(seg));
        dfs(t.to, tp + pm.len, segs, e.pos == "DET", next_require, next_forbid);
        segs.pop_back();
      }
    }
  }

  const CompiledDictionary& cd_;
  const TypoRuleSet& rs_;
  const MorphGraph& agg_;
  std::string_view token_;
  std::set<Analysis, AnalysisLess> results_;
};

// Interprets the grammar network directly, following subgraph calls with an
// explicit return stack instead of inlining them.  Same language as the
// flattened analyzer; kept for comparison and as a fallback.
class RtnAnalyzer {
public:
  RtnAnalyzer(const CompiledDictionary& cd, const TypoRuleSet& rs,
              const GrammarSet& set, const MorphGraph& root,
              std::string_view token)
      : cd_(cd), rs_(rs), set_(set), root_(root), token_(token) {}

  std::vector<Analysis> run() {
    std::vector<Segment> segs;
    dfs(root_, root_.initial, 0, segs, {false, false, false}, {});
    return {results_.begin(), results_.end()};
  }

private:
  struct Flags {
    bool after_det, require_pro, forbid_pro;
  };
  using Stack = std::vector<std::pair<const MorphGraph*, std::uint32_t>>;

  struct AnalysisLess {
    bool operator()(const Analysis& a, const Analysis& b) const {
      return a.render() < b.render();
    }
  };

  void dfs(const MorphGraph& g, std::uint32_t s, std::size_t tp,
           std::vector<Segment>& segs, Flags fl, const Stack& stack) {
    if (g.finals[s]) {
      if (stack.empty()) {
        if (tp == token_.size() && !fl.require_pro)
          results_.insert(Analysis{segs});
      } else {
        Stack up = stack;
        auto [caller, resume] = up.back();
        up.pop_back();
        dfs(*caller, resume, tp, segs, fl, up);
      }
    }
    for (auto ti : g.adj[s]) {
      const auto& t = g.transitions[ti];
      switch (t.label.kind) {
      case Label::Kind::Call: {
        if (stack.size() > 64)
          throw RecursiveGrammar("call depth exceeded in '" + g.name + "'");
        Stack down = stack;
        down.emplace_back(&g, t.to);
        const MorphGraph& sub = set_.at(t.label.text);
        dfs(sub, sub.initial, tp, segs, fl, down);
        break;
      }
      case Label::Kind::Literal:
        if (t.label.text.empty()) {
          dfs(g, t.to, tp, segs, fl, stack);
          break;
        }
        step_literal(g, t, tp, segs, fl, stack);
        break;
      case Label::Kind::Mask:
        step_mask(g, t, tp, segs, fl, stack);
        break;
      default:
        throw GrammarError("agglutination grammar '" + g.name +
                           "' carries a non-slot label " + t.label.render());
      }
    }
  }

  void step_literal(const MorphGraph& g, const MorphTransition& t,
                    std::size_t tp, std::vector<Segment>& segs, Flags fl,
                    const Stack& stack) {
    Segment seg;
    seg.restored = t.label.text;
    seg.lemma = t.label.text;
    if (!t.output.empty() && !annotation_to_segment(t.output, seg)) return;
    bool is_det = seg.pos == "DET";
    bool is_pro = seg.pos == "PRO";
    if (is_pro && fl.forbid_pro) return;

    Madfa chain = chain_madfa(t.label.text);
    MatchContext ctx;
    ctx.determiner_start = is_det;
    for (const auto& pm : Matcher(chain, rs_, token_.substr(tp), ctx).run()) {
      if (pm.len == 0) continue;
      seg.written = std::string(token_.substr(tp, pm.len));
      segs.push_back(seg);
      dfs(g, t.to, tp + pm.len, segs,
          {is_det, is_pro ? false : fl.require_pro, fl.forbid_pro}, stack);
      segs.pop_back();
    }
  }

  void step_mask(const MorphGraph& g, const MorphTransition& t, std::size_t tp,
                 std::vector<Segment>& segs, Flags fl, const Stack& stack) {
    MatchContext ctx;
    ctx.after_determiner = fl.after_det;
    for (const auto& pm : match_token_prefix(cd_, rs_, token_.substr(tp), ctx)) {
      if (pm.len == 0) continue;
      std::vector<DictEntry> entries;
      for (auto idx : pm.inf) cd_.append_expanded(pm.restored, idx, entries);
      for (const auto& e : entries) {
        if (!mask_matches(t.label.mask, e)) continue;
        bool is_pro = e.pos == "PRO";
        if (is_pro && fl.forbid_pro) continue;
        Segment seg;
        seg.written = std::string(token_.substr(tp, pm.len));
        seg.restored = pm.restored;
        seg.lemma = e.lemma;
        seg.pos = e.pos;
        seg.sem_features = e.sem_features;
        for (std::size_t i = 0; i < e.infl_codes.size(); ++i)
          seg.code += (i ? ":" : "") + e.infl_codes[i];
        Flags next{e.pos == "DET",
                   e.has_sem("pro") || (is_pro ? false : fl.require_pro),
                   fl.forbid_pro || e.has_sem("nopro")};
        segs.push_back(std::move(seg));
        dfs(g, t.to, tp + pm.len, segs, next, stack);
        segs.pop_back();
      }
    }
  }

  const CompiledDictionary& cd_;
  const TypoRuleSet& rs_;
  const GrammarSet& set_;
  const MorphGraph& root_;
  std::string_view token_;
  std::set<Analysis, AnalysisLess> results_;
};

} // namespace detail

/// All segmentations of the token licensed by the agglutination grammar.
inline std::vector<Analysis>
analyze_token(const CompiledDictionary& cd, const TypoRuleSet& rs,
              const MorphGraph& agg, std::string_view token) {
  return detail::AggAnalyzer(cd, rs, agg, token).run();
}

/// Same result through direct network interpretation, without flattening.
inline std::vector<Analysis>
analyze_token_rtn(const CompiledDictionary& cd, const TypoRuleSet& rs,
                  const GrammarSet& set, const std::string& root,
                  std::string_view token) {
  auto it = set.find(root);
  if (it == set.end()) throw UnknownClass("unknown root graph '" + root + "'");
  return detail::RtnAnalyzer(cd, rs, set, it->second, token).run();
}

struct TokenCache {
  std::unordered_map<std::string, std::vector<Analysis>> map;
  std::uint64_t hits = 0, misses = 0;

  // configuration identity; a change flushes everything
  const void* dict = nullptr;
  const void* grammar = nullptr;
  std::uint64_t rules_fp = 0;
  std::uint64_t structure_fp = 0;

  void ensure(const CompiledDictionary& cd, const TypoRuleSet& rs,
              const MorphGraph& agg) {
    std::uint64_t sfp = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) { sfp = (sfp ^ v) * 1099511628211ull; };
    mix(cd.entry_count);
    mix(cd.inf_table.size());
    mix(cd.madfa.states.size());
    mix(agg.transitions.size());
    mix(agg.state_names.size());
    if (dict == &cd && grammar == &agg && rules_fp == rs.fingerprint() &&
        structure_fp == sfp)
      return;
    map.clear();
    hits = misses = 0;
    dict = &cd;
    grammar = &agg;
    rules_fp = rs.fingerprint();
    structure_fp = sfp;
  }
};

inline const std::vector<Analysis>&
analyze_cached(TokenCache& cache, const CompiledDictionary& cd,
               const TypoRuleSet& rs, const MorphGraph& agg,
               std::string_view token) {
  cache.ensure(cd, rs, agg);
  auto it = cache.map.find(std::string(token));
  if (it != cache.map.end()) {
    ++cache.hits;
    return it->second;
  }
  ++cache.misses;
  auto res = analyze_token(cd, rs, agg, token);
  return cache.map.emplace(std::string(token), std::move(res)).first->second;
}

/// Splits on anything that is not a TB++ character.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (is_tbpp_letter(c) || is_diacritic(c) || c == '_') {
      cur.push_back(c);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

struct TokenAnnotation {
  std::string token;
  std::vector<Analysis> analyses;

  /// "token<TAB>{seg}{seg}" or "token<TAB>?", one line per analysis
  std::vector<std::string> render_lines() const {
    std::vector<std::string> lines;
    if (analyses.empty()) {
      lines.push_back(token + "\t?");
      return lines;
    }
    for (const auto& a : analyses) lines.push_back(token + "\t" + a.render());
    return lines;
  }
};

inline std::vector<TokenAnnotation>
annotate_text(const CompiledDictionary& cd, const TypoRuleSet& rs,
              const MorphGraph& agg, std::string_view text,
              TokenCache* cache = nullptr) {
  std::vector<TokenAnnotation> out;
  for (auto& tok : tokenize(text)) {
    std::string norm = normalize_token(tok);
    TokenAnnotation ta;
    ta.token = tok;
    ta.analyses = cache ? analyze_cached(*cache, cd, rs, agg, norm)
                        : analyze_token(cd, rs, agg, norm);
    out.push_back(std::move(ta));
  }
  return out;
}

enum class SpellFlagKind { InvalidDiacritic, UnknownWord };

struct SpellFlag {
  std::string token;
  SpellFlagKind kind;
};

/// Every omission rule forced on; substitution and assimilation flags kept.
inline TypoRuleSet all_omission(TypoRuleSet rs) {
  for (std::size_t i = 0; i <= static_cast<std::size_t>(
                                   Rule::ShaddaSuperscriptAlefOmission);
       ++i)
    rs.on[i] = true;
  return rs;
}

inline std::vector<SpellFlag>
spellcheck(const CompiledDictionary& cd, const TypoRuleSet& rs,
           const MorphGraph& agg, std::string_view text,
           TokenCache* cache = nullptr) {
  std::vector<SpellFlag> flags;
  TypoRuleSet loose = all_omission(rs);
  for (const auto& ta : annotate_text(cd, rs, agg, text, cache)) {
    if (!ta.analyses.empty()) continue;
    std::string skeleton =
        strip_diacritics(normalize_token(ta.token)).skeleton;
    bool skeleton_known = !analyze_token(cd, loose, agg, skeleton).empty();
    flags.push_back({ta.token, skeleton_known ? SpellFlagKind::InvalidDiacritic
                                              : SpellFlagKind::UnknownWord});
  }
  return flags;
}

/// Number of distinct text spellings the ruleset licenses across the whole
/// dictionary: per surface, the product of its cluster realization counts.
inline std::uint64_t count_partial_forms(const CompiledDictionary& cd,
                                         const TypoRuleSet& rs) {
  std::uint64_t total = 0;
  cd.madfa.for_each_surface([&](std::string_view surface, const auto&) {
    std::uint64_t forms = 1;
    for (const auto& cl : decompose_surface(surface))
      forms *= realizations(rs, cl.seq, cl.pos).size();
    total += forms;
  });
  return total;
}

} // namespace otdl

#endif // OTDL_LOOKUP_HPP
