// Graph grammars: a line-based DSL for inflectional transducers and
// agglutination grammars, flattening of subgraph calls into a single
// automaton, and generation of full-form dictionaries.
//
// DSL, one statement per line ('#' starts a comment):
//   graph NAME
//   final STATE [STATE...]
//   FROM -> TO : LABEL [/ OUTPUT]
//
// Labels:
//   "text"      literal (quoted), <E> empty literal
//   L  R        cursor operators (concatenative mode)
//   <LEMMA>     copy the whole lemma (Semitic mode)
//   <3.LEMMA>   copy the lemma from 1-based position 3 to its end
//   1u3a5       pattern: digits copy lemma slots, letters are literals;
//               "(12)" addresses slots past 9
//   :NAME       call of subgraph NAME
//   <N+Hum:G>   lexical mask (agglutination grammars)
//
// The source state of a graph's first transition is its initial state.

#ifndef OTDL_MORPHGRAPH_HPP
#define OTDL_MORPHGRAPH_HPP

#include "otdl/compact_tag.hpp"
#include "otdl/lexicon.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace otdl {

struct GrammarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RecursiveGrammar : GrammarError {
  using GrammarError::GrammarError;
};
struct UnresolvedSubgraph : GrammarError {
  using GrammarError::GrammarError;
};
struct UnknownClass : GrammarError {
  using GrammarError::GrammarError;
};
struct CursorUnderflow : GrammarError {
  using GrammarError::GrammarError;
};
struct SlotOutOfRange : GrammarError {
  using GrammarError::GrammarError;
};

struct Label {
  enum class Kind {
    Literal,
    CursorL,
    CursorR,
    CopyLemmaAll,
    CopyLemmaFrom,
    Pattern,
    Call,
    Mask,
  };
  Kind kind = Kind::Literal;
  std::string text;   // Literal content, Pattern body, Call target
  std::size_t k = 0;  // CopyLemmaFrom position, 1-based
  LexicalMask mask;

  std::string render() const {
    switch (kind) {
    case Kind::Literal: return text.empty() ? "<E>" : "\"" + text + "\"";
    case Kind::CursorL: return "L";
    case Kind::CursorR: return "R";
    case Kind::CopyLemmaAll: return "<LEMMA>";
    case Kind::CopyLemmaFrom: return "<" + std::to_string(k) + ".LEMMA>";
    case Kind::Pattern: return text;
    case Kind::Call: return ":" + text;
    case Kind::Mask: return mask.render();
    }
    return "";
  }
};

struct MorphTransition {
  std::uint32_t from = 0, to = 0;
  Label label;
  std::string output;
};

struct MorphGraph {
  std::string name;
  std::vector<std::string> state_names;
  std::uint32_t initial = 0;
  std::vector<bool> finals;
  std::vector<MorphTransition> transitions;
  std::vector<std::vector<std::uint32_t>> adj; // transition indices per state

  std::uint32_t state(const std::string& id) {
    for (std::uint32_t i = 0; i < state_names.size(); ++i)
      if (state_names[i] == id) return i;
    state_names.push_back(id);
    finals.push_back(false);
    return static_cast<std::uint32_t>(state_names.size() - 1);
  }

  void rebuild_adj() {
    adj.assign(state_names.size(), {});
    for (std::uint32_t i = 0; i < transitions.size(); ++i)
      adj[transitions[i].from].push_back(i);
  }

  bool has_final() const {
    for (bool f : finals)
      if (f) return true;
    return false;
  }
};

using GrammarSet = std::map<std::string, MorphGraph>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline Label parse_label(std::string_view text, std::size_t lineno) {
  auto err = [&](const std::string& msg) -> GrammarError {
    return GrammarError("line " + std::to_string(lineno) + ": " + msg);
  };
  Label l;
  if (text == "<E>") return l;
  if (text.size() >= 2 && text.front() == '"') {
    if (text.back() != '"') throw err("unterminated literal");
    l.text = std::string(text.substr(1, text.size() - 2));
    return l;
  }
  if (text == "L") { l.kind = Label::Kind::CursorL; return l; }
  if (text == "R") { l.kind = Label::Kind::CursorR; return l; }
  if (text == "<LEMMA>") { l.kind = Label::Kind::CopyLemmaAll; return l; }
  if (text.size() > 1 && text.front() == ':') {
    l.kind = Label::Kind::Call;
    l.text = std::string(text.substr(1));
    return l;
  }
  if (!text.empty() && text.front() == '<') {
    // <k.LEMMA> or a lexical mask
    std::size_t dot = text.find(".LEMMA>");
    if (dot != std::string_view::npos && text.back() == '>') {
      std::string num(text.substr(1, dot - 1));
      if (!num.empty() &&
          num.find_first_not_of("0123456789") == std::string::npos) {
        l.kind = Label::Kind::CopyLemmaFrom;
        l.k = std::stoul(num);
        if (l.k == 0) throw err("lemma positions are 1-based");
        return l;
      }
    }
    auto m = parse_mask(text);
    if (!m) throw err("malformed label '" + std::string(text) + "'");
    l.kind = Label::Kind::Mask;
    l.mask = std::move(*m);
    return l;
  }
  if (text.empty()) throw err("empty label");
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') {
      std::size_t close = text.find(')', i);
      if (close == std::string_view::npos) throw err("unterminated slot number");
      i = close;
      continue;
    }
    if (!(c >= '0' && c <= '9') && !is_tbpp_letter(c) && !is_diacritic(c))
      throw err(std::string("bad pattern character '") + c + "'");
  }
  l.kind = Label::Kind::Pattern;
  l.text = std::string(text);
  return l;
}

} // namespace detail

inline GrammarSet parse_grammar(std::istream& in) {
  GrammarSet set;
  MorphGraph* cur = nullptr;
  std::string line;
  std::size_t lineno = 0;
  auto err = [&](const std::string& msg) -> GrammarError {
    return GrammarError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos)
      body = body.substr(0, hash);
    body = detail::trim(body);
    if (body.empty()) continue;

    if (body.substr(0, 6) == "graph ") {
      std::string name(detail::trim(body.substr(6)));
      if (name.empty()) throw err("graph needs a name");
      if (set.count(name)) throw err("duplicate graph '" + name + "'");
      cur = &set[name];
      cur->name = name;
      continue;
    }
    if (!cur) throw err("statement outside a graph");
    if (body.substr(0, 6) == "final ") {
      std::istringstream ss{std::string(body.substr(6))};
      std::string id;
      while (ss >> id) cur->finals[cur->state(id)] = true;
      continue;
    }
    auto arrow = body.find("->");
    if (arrow == std::string_view::npos) throw err("expected '->'");
    std::string from(detail::trim(body.substr(0, arrow)));
    std::string_view rest = body.substr(arrow + 2);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw err("expected ':' before label");
    std::string to(detail::trim(rest.substr(0, colon)));
    if (from.empty() || to.empty()) throw err("missing state name");
    std::string_view tail = rest.substr(colon + 1);
    std::string output;
    if (auto sep = tail.find(" / "); sep != std::string_view::npos) {
      output = std::string(detail::trim(tail.substr(sep + 3)));
      tail = tail.substr(0, sep);
    }
    MorphTransition t;
    t.from = cur->state(from);
    t.to = cur->state(to);
    t.label = detail::parse_label(detail::trim(tail), lineno);
    t.output = std::move(output);
    if (cur->transitions.empty()) cur->initial = t.from;
    cur->transitions.push_back(std::move(t));
  }
  for (auto& [name, g] : set) {
    if (g.transitions.empty()) throw GrammarError("graph '" + name + "' is empty");
    if (!g.has_final())
      throw GrammarError("graph '" + name + "' has no final state");
    g.rebuild_adj();
    for (const auto& t : g.transitions)
      if (t.label.kind == Label::Kind::Call && !set.count(t.label.text))
        throw UnresolvedSubgraph("graph '" + name + "' calls unknown ':" +
                                 t.label.text + "'");
  }
  return set;
}

inline GrammarSet load_grammar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open grammar: " + path);
  return parse_grammar(in);
}

namespace detail {

struct Flattener {
  const GrammarSet& set;
  MorphGraph out;
  std::vector<std::string> stack;

  std::uint32_t fresh(const std::string& hint) {
    out.state_names.push_back(hint + "#" +
                              std::to_string(out.state_names.size()));
    out.finals.push_back(false);
    return static_cast<std::uint32_t>(out.state_names.size() - 1);
  }

  // copies g into out; returns (initial, finals) of the copy
  std::pair<std::uint32_t, std::vector<std::uint32_t>>
  copy(const MorphGraph& g) {
    for (const auto& frame : stack)
      if (frame == g.name)
        throw RecursiveGrammar("recursive call of graph '" + g.name + "'");
    stack.push_back(g.name);
    std::vector<std::uint32_t> map(g.state_names.size());
    for (std::size_t i = 0; i < g.state_names.size(); ++i)
      map[i] = fresh(g.name);
    std::vector<std::uint32_t> finals;
    for (std::size_t i = 0; i < g.state_names.size(); ++i)
      if (g.finals[i]) finals.push_back(map[i]);
    for (const auto& t : g.transitions) {
      if (t.label.kind == Label::Kind::Call) {
        auto [sub_init, sub_finals] = copy(set.at(t.label.text));
        MorphTransition entry;
        entry.from = map[t.from];
        entry.to = sub_init;
        entry.output = t.output;
        out.transitions.push_back(entry);
        for (auto f : sub_finals) {
          MorphTransition exit;
          exit.from = f;
          exit.to = map[t.to];
          out.transitions.push_back(exit);
        }
      } else {
        MorphTransition c = t;
        c.from = map[t.from];
        c.to = map[t.to];
        out.transitions.push_back(c);
      }
    }
    stack.pop_back();
    return {map[g.initial], finals};
  }
};

} // namespace detail

/// Inlines all subgraph calls of the root graph into one automaton.
inline MorphGraph flatten(const GrammarSet& set, const std::string& root) {
  auto it = set.find(root);
  if (it == set.end()) throw UnknownClass("unknown root graph '" + root + "'");
  detail::Flattener fl{set, {}, {}};
  auto [init, finals] = fl.copy(it->second);
  fl.out.name = root;
  fl.out.initial = init;
  for (auto f : finals) fl.out.finals[f] = true;
  fl.out.rebuild_adj();
  return fl.out;
}

/// Flattened agglutination grammar: only literal and mask labels remain.
inline MorphGraph build_agglutination(const GrammarSet& set,
                                      const std::string& root) {
  MorphGraph g = flatten(set, root);
  for (const auto& t : g.transitions)
    if (t.label.kind != Label::Kind::Literal &&
        t.label.kind != Label::Kind::Mask)
      throw GrammarError("agglutination grammar '" + root +
                         "' carries a non-slot label " + t.label.render());
  return g;
}

namespace detail {

struct InflectEngine {
  const GrammarSet& set;
  TagMode mode;
  std::string_view lemma;
  std::set<std::pair<std::string, std::string>> results;
  std::size_t steps = 0;

  struct Buf {
    std::string prefix;  // concatenative: produced output
    std::string pending; // concatenative: original letters right of cursor
    std::string sem;     // Semitic buffer
    std::string code;
  };

  void literal_chars(Buf& b, std::string_view text) {
    if (mode == TagMode::Semitic) {
      b.sem.append(text);
      return;
    }
    for (char c : text) {
      if (!b.pending.empty()) b.pending.erase(b.pending.begin());
      b.prefix.push_back(c);
    }
  }

  void slot(Buf& b, std::size_t k) {
    if (mode != TagMode::Semitic)
      throw GrammarError("slot digits need the Semitic mode");
    if (k == 0 || k > lemma.size())
      throw SlotOutOfRange("slot " + std::to_string(k) + " exceeds lemma '" +
                           std::string(lemma) + "'");
    b.sem.push_back(lemma[k - 1]);
  }

  void apply(Buf& b, const Label& l) {
    switch (l.kind) {
    case Label::Kind::Literal:
      literal_chars(b, l.text);
      break;
    case Label::Kind::CursorL:
      if (mode == TagMode::Semitic)
        throw GrammarError("cursor L needs the concatenative mode");
      if (b.prefix.empty()) throw CursorUnderflow("L with empty prefix");
      b.pending.insert(b.pending.begin(), b.prefix.back());
      b.prefix.pop_back();
      break;
    case Label::Kind::CursorR:
      if (mode == TagMode::Semitic)
        throw GrammarError("cursor R needs the concatenative mode");
      if (b.pending.empty()) throw CursorUnderflow("R with no pending letters");
      b.prefix.push_back(b.pending.front());
      b.pending.erase(b.pending.begin());
      break;
    case Label::Kind::CopyLemmaAll:
      if (mode != TagMode::Semitic)
        throw GrammarError("<LEMMA> needs the Semitic mode");
      b.sem.append(lemma);
      break;
    case Label::Kind::CopyLemmaFrom:
      if (mode != TagMode::Semitic)
        throw GrammarError("<n.LEMMA> needs the Semitic mode");
      if (l.k > lemma.size())
        throw SlotOutOfRange("position " + std::to_string(l.k) +
                             " exceeds lemma '" + std::string(lemma) + "'");
      b.sem.append(lemma.substr(l.k - 1));
      break;
    case Label::Kind::Pattern:
      for (std::size_t i = 0; i < l.text.size(); ++i) {
        char c = l.text[i];
        if (c >= '0' && c <= '9') {
          slot(b, static_cast<std::size_t>(c - '0'));
        } else if (c == '(') {
          std::size_t close = l.text.find(')', i);
          slot(b, std::stoul(l.text.substr(i + 1, close - i - 1)));
          i = close;
        } else {
          literal_chars(b, std::string_view(&c, 1));
        }
      }
      break;
    case Label::Kind::Call:
    case Label::Kind::Mask:
      throw GrammarError("label " + l.render() + " not usable in inflection");
    }
  }

  using ReturnStack = std::vector<std::pair<const MorphGraph*, std::uint32_t>>;

  void walk(const MorphGraph& g, std::uint32_t s, const Buf& b,
            const ReturnStack& stack) {
    if (++steps > 1000000)
      throw GrammarError("inflection path explosion, grammar likely cyclic");
    if (g.finals[s]) {
      if (stack.empty()) {
        std::string surface =
            mode == TagMode::Semitic ? b.sem : b.prefix + b.pending;
        results.emplace(std::move(surface), b.code);
      } else {
        ReturnStack up = stack;
        auto [caller, resume] = up.back();
        up.pop_back();
        walk(*caller, resume, b, up);
      }
    }
    for (auto ti : g.adj[s]) {
      const auto& t = g.transitions[ti];
      Buf nb = b;
      if (!t.output.empty()) nb.code += t.output;
      if (t.label.kind == Label::Kind::Call) {
        if (stack.size() > 64)
          throw RecursiveGrammar("call depth exceeded in graph '" + g.name + "'");
        ReturnStack down = stack;
        down.emplace_back(&g, t.to);
        const MorphGraph& sub = set.at(t.label.text);
        walk(sub, sub.initial, nb, down);
      } else {
        apply(nb, t.label);
        walk(g, t.to, nb, stack);
      }
    }
  }
};

} // namespace detail

/// All (surface, code) pairs produced by the named root graph for a lemma.
inline std::set<std::pair<std::string, std::string>>
inflect(std::string_view lemma, const GrammarSet& set, const std::string& root,
        TagMode mode) {
  auto it = set.find(root);
  if (it == set.end()) throw UnknownClass("unknown inflection class '" + root + "'");
  detail::InflectEngine eng{set, mode, lemma, {}, 0};
  detail::InflectEngine::Buf b;
  if (mode != TagMode::Semitic) b.prefix.assign(lemma);
  eng.walk(it->second, it->second.initial, b, {});
  return std::move(eng.results);
}

/// Convenience overload for an already flattened graph.
inline std::set<std::pair<std::string, std::string>>
inflect(std::string_view lemma, const MorphGraph& flat, TagMode mode) {
  GrammarSet one;
  one[flat.name] = flat;
  return inflect(lemma, one, flat.name, mode);
}

struct LemmaLexicon {
  struct Row {
    std::string lemma;
    std::string cls;
  };
  std::vector<Row> rows;
};

inline LemmaLexicon parse_lemma_lexicon(std::istream& in) {
  LemmaLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (auto slash = body.find('/'); slash != std::string_view::npos)
      body = body.substr(0, slash);
    body = detail::trim(body);
    if (body.empty()) continue;
    auto comma = body.find(',');
    if (comma == std::string_view::npos)
      throw GrammarError("lemma lexicon line " + std::to_string(lineno) +
                         ": missing ','");
    LemmaLexicon::Row r;
    r.lemma = std::string(detail::trim(body.substr(0, comma)));
    r.cls = std::string(detail::trim(body.substr(comma + 1)));
    if (r.lemma.empty() || r.cls.empty())
      throw GrammarError("lemma lexicon line " + std::to_string(lineno) +
                         ": empty field");
    lex.rows.push_back(std::move(r));
  }
  return lex;
}

/// Inflects every lemma of the lexicon through its class graph.  A class
/// starting with '$' selects the Semitic mode; the graph may be registered
/// with or without the '$'.  Output is sorted and duplicate-free.
inline FlatDictionary generate_dictionary(const LemmaLexicon& lex,
                                          const GrammarSet& set) {
  std::set<std::string> lines;
  for (const auto& row : lex.rows) {
    TagMode mode = row.cls.front() == '$' ? TagMode::Semitic : TagMode::Suffix;
    std::string root = row.cls;
    if (!set.count(root) && root.front() == '$') root = root.substr(1);
    if (!set.count(root))
      throw UnknownClass("unknown inflection class '" + row.cls + "'");
    for (const auto& [surface, code] : inflect(row.lemma, set, root, mode))
      lines.insert(surface + "," + row.lemma + "." + code);
  }
  std::string joined;
  for (const auto& l : lines) joined += l + "\n";
  std::istringstream ss(joined);
  return parse_flat(ss);
}

} // namespace otdl

#endif // OTDL_MORPHGRAPH_HPP
