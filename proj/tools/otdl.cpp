// Command-line front end: compile, generate, flatten, analyze, restore,
// spellcheck, count, translit, bench.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include "otdl/otdl.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

using namespace otdl;
using nlohmann::json;

namespace {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> dicts;
  std::string rules_path;
  std::string grammar_path;
  std::string root;
  std::string mode = "semitic";
  std::string encoding = "tbpp";
  std::string format = "lines";
  bool no_cache = false;
  bool no_flatten = false;
};

std::string data_dir() {
  if (const char* env = std::getenv("OTDL_DATA_DIR")) return env;
  return "data";
}

TagMode tag_mode(const Options& o) {
  return o.mode == "concat" ? TagMode::Suffix : TagMode::Semitic;
}

TypoRuleSet load_rule_file(const Options& o) {
  std::string path = o.rules_path;
  if (path.empty()) {
    path = data_dir() + "/arabic-typo-rules.txt";
    if (!std::filesystem::exists(path)) return default_rules();
  }
  std::ifstream in(path);
  if (!in) throw DataError("cannot open rules: " + path);
  std::vector<RuleDiagnostic> diags;
  TypoRuleSet rs = parse_rules(in, &diags);
  for (const auto& d : diags)
    std::cerr << "rules:" << d.line << ": " << d.message << "\n";
  if (!diags.empty()) throw DataError("malformed rule file: " + path);
  return rs;
}

bool is_compiled(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::string_view(magic, 4) == "OTDL";
}

CompiledDictionary load_dict(const std::string& path, const Options& o) {
  if (is_compiled(path)) return deserialize(path);
  FlatDictionary d = load_flat(path);
  for (const auto& diag : d.diagnostics)
    std::cerr << path << ":" << diag.line << ": " << diag.message << "\n";
  if (!d.diagnostics.empty())
    throw DataError(std::to_string(d.diagnostics.size()) +
                    " malformed lines in " + path);
  return build(d, tag_mode(o));
}

std::vector<CompiledDictionary> load_dicts(const Options& o) {
  if (o.dicts.empty()) throw DataError("at least one --dict is required");
  std::vector<CompiledDictionary> out;
  for (const auto& p : o.dicts) out.push_back(load_dict(p, o));
  return out;
}

std::unique_ptr<std::ifstream> open_input(const std::string& path) {
  if (path.empty() || path == "-") return nullptr; // stdin
  auto in = std::make_unique<std::ifstream>(path);
  if (!*in) throw DataError("cannot open input: " + path);
  return in;
}

std::string maybe_translit(const Options& o, const std::string& line) {
  if (o.encoding != "arabic") return line;
  auto r = to_translit(line);
  return r.text;
}

json analysis_json(const Analysis& a) {
  json segs = json::array();
  for (const auto& s : a.segments)
    segs.push_back({{"written", s.written},
                    {"restored", s.restored},
                    {"lemma", s.lemma},
                    {"pos", s.pos},
                    {"features", s.sem_features},
                    {"code", s.code}});
  return segs;
}

// Shared analysis loop: calls fn(token, analyses) per input token, in order.
template <class Fn>
void for_each_token(const Options& o, const std::vector<CompiledDictionary>& cds,
                    const TypoRuleSet& rs, const MorphGraph& agg,
                    const GrammarSet& set, const std::string& root,
                    std::istream& in, Fn&& fn) {
  std::vector<TokenCache> caches(cds.size());
  std::string line;
  while (std::getline(in, line)) {
    for (const auto& tok : tokenize(maybe_translit(o, line))) {
      std::string norm = normalize_token(tok);
      std::vector<Analysis> all;
      for (std::size_t i = 0; i < cds.size(); ++i) {
        std::vector<Analysis> part;
        if (o.no_flatten)
          part = analyze_token_rtn(cds[i], rs, set, root, norm);
        else if (o.no_cache)
          part = analyze_token(cds[i], rs, agg, norm);
        else
          part = analyze_cached(caches[i], cds[i], rs, agg, norm);
        all.insert(all.end(), part.begin(), part.end());
      }
      fn(tok, all);
    }
  }
}

struct GrammarBundle {
  GrammarSet set;
  std::string root;
  MorphGraph agg;
};

GrammarBundle load_agg(const Options& o) {
  if (o.grammar_path.empty()) throw DataError("--grammar is required");
  GrammarBundle b;
  b.set = load_grammar(o.grammar_path);
  b.root = o.root;
  if (b.root.empty()) {
    if (b.set.size() != 1)
      throw DataError("--root is required when the grammar has several graphs");
    b.root = b.set.begin()->first;
  }
  b.agg = build_agglutination(b.set, b.root);
  return b;
}

int cmd_compile(const Options& o, const std::string& out_path) {
  if (o.dicts.size() != 1) throw DataError("compile takes exactly one --dict");
  FlatDictionary d = load_flat(o.dicts[0]);
  if (!d.diagnostics.empty())
    throw DataError(std::to_string(d.diagnostics.size()) +
                    " malformed lines in " + o.dicts[0]);
  CompiledDictionary cd = build(d, tag_mode(o));
  serialize(cd, out_path);
  auto st = stats(cd);
  auto flat_bytes = std::filesystem::file_size(o.dicts[0]);
  auto bin_bytes = std::filesystem::file_size(out_path);
  std::cout << "entries      " << st.entries << "\n"
            << "surfaces     " << st.surfaces << "\n"
            << "INF entries  " << st.inf_entries << "\n"
            << "states       " << st.states << "\n"
            << "transitions  " << st.transitions << "\n"
            << "flat bytes   " << flat_bytes << "\n"
            << "binary bytes " << bin_bytes << "\n"
            << "ratio        "
            << static_cast<double>(bin_bytes) / static_cast<double>(flat_bytes)
            << "\n";
  return 0;
}

int cmd_generate(const Options& o, const std::string& lexicon_path,
                 const std::string& out_path) {
  if (o.grammar_path.empty()) throw DataError("--grammar is required");
  std::ifstream lin(lexicon_path);
  if (!lin) throw DataError("cannot open lexicon: " + lexicon_path);
  LemmaLexicon lex = parse_lemma_lexicon(lin);
  GrammarSet set = load_grammar(o.grammar_path);
  FlatDictionary d = generate_dictionary(lex, set);
  std::ofstream out(out_path);
  if (!out) throw DataError("cannot write: " + out_path);
  for (const auto& e : d.entries) out << e.render() << "\n";
  std::cout << lex.rows.size() << " lemmas -> " << d.entries.size()
            << " entries\n";
  return 0;
}

void write_graph(std::ostream& out, const MorphGraph& g) {
  out << "graph " << g.name << "\n";
  // the first written transition must leave the initial state
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < g.transitions.size(); ++i)
    if (g.transitions[i].from == g.initial) order.push_back(i);
  for (std::size_t i = 0; i < g.transitions.size(); ++i)
    if (g.transitions[i].from != g.initial) order.push_back(i);
  for (auto i : order) {
    const auto& t = g.transitions[i];
    out << g.state_names[t.from] << " -> " << g.state_names[t.to] << " : "
        << t.label.render();
    if (!t.output.empty()) out << " / " << t.output;
    out << "\n";
  }
  out << "final";
  for (std::size_t s = 0; s < g.finals.size(); ++s)
    if (g.finals[s]) out << " " << g.state_names[s];
  out << "\n";
}

int cmd_flatten(const Options& o, const std::string& out_path) {
  if (o.grammar_path.empty()) throw DataError("--grammar is required");
  GrammarSet set = load_grammar(o.grammar_path);
  std::string root = o.root;
  if (root.empty()) {
    if (set.size() != 1) throw DataError("--root is required");
    root = set.begin()->first;
  }
  MorphGraph flat = flatten(set, root);
  std::ofstream out(out_path);
  if (!out) throw DataError("cannot write: " + out_path);
  write_graph(out, flat);
  std::size_t src_states = 0, src_trans = 0;
  for (const auto& [name, g] : set) {
    src_states += g.state_names.size();
    src_trans += g.transitions.size();
  }
  std::cout << "source: " << set.size() << " graphs, " << src_states
            << " states, " << src_trans << " transitions\n"
            << "flattened: 1 graph, " << flat.state_names.size() << " states, "
            << flat.transitions.size() << " transitions\n";
  return 0;
}

int cmd_analyze(const Options& o, const std::string& input, bool restore_only) {
  auto cds = load_dicts(o);
  TypoRuleSet rs = load_rule_file(o);
  GrammarBundle gb = load_agg(o);
  auto file = open_input(input);
  std::istream& in = file ? *file : std::cin;
  for_each_token(o, cds, rs, gb.agg, gb.set, gb.root, in,
                 [&](const std::string& tok, const std::vector<Analysis>& all) {
    if (o.format == "json") {
      json j{{"token", tok}, {"analyses", json::array()}};
      for (const auto& a : all) {
        if (restore_only) {
          std::string r;
          for (const auto& s : a.segments) r += s.restored;
          j["analyses"].push_back(r);
        } else {
          j["analyses"].push_back(analysis_json(a));
        }
      }
      std::cout << j.dump() << "\n";
      return;
    }
    // exactly one output line per input token
    if (all.empty()) {
      std::cout << tok << "\t?\n";
      return;
    }
    std::set<std::string> readings;
    for (const auto& a : all) {
      if (restore_only) {
        std::string r;
        for (const auto& s : a.segments) r += s.restored;
        readings.insert(r);
      } else {
        readings.insert(a.render());
      }
    }
    std::cout << tok << "\t";
    bool first = true;
    for (const auto& r : readings) {
      if (!first) std::cout << " ; ";
      first = false;
      std::cout << r;
    }
    std::cout << "\n";
  });
  return 0;
}

int cmd_spellcheck(const Options& o, const std::string& input) {
  auto cds = load_dicts(o);
  TypoRuleSet rs = load_rule_file(o);
  GrammarBundle gb = load_agg(o);
  TypoRuleSet loose = all_omission(rs);
  auto file = open_input(input);
  std::istream& in = file ? *file : std::cin;
  for_each_token(o, cds, rs, gb.agg, gb.set, gb.root, in,
                 [&](const std::string& tok, const std::vector<Analysis>& all) {
    if (!all.empty()) return;
    std::string skeleton = strip_diacritics(normalize_token(tok)).skeleton;
    bool known = false;
    for (const auto& cd : cds)
      if (!analyze_token(cd, loose, gb.agg, skeleton).empty()) known = true;
    std::cout << tok << "\t" << (known ? "invalid-diacritic" : "unknown-word")
              << "\n";
  });
  return 0;
}

int cmd_count(const Options& o) {
  auto cds = load_dicts(o);
  TypoRuleSet rs = load_rule_file(o);
  std::uint64_t total = 0;
  for (const auto& cd : cds) total += count_partial_forms(cd, rs);
  std::cout << total << "\n";
  return 0;
}

int cmd_translit(const Options& o, const std::string& input) {
  auto file = open_input(input);
  std::istream& in = file ? *file : std::cin;
  std::string line;
  bool clean = true;
  while (std::getline(in, line)) {
    auto r = o.encoding == "arabic" ? from_translit(line) : to_translit(line);
    clean = clean && r.uncovered.empty();
    std::cout << r.text << "\n";
  }
  return clean ? 0 : 2;
}

int cmd_bench(const Options& o, const std::string& corpus) {
  auto cds = load_dicts(o);
  TypoRuleSet rs = load_rule_file(o);
  GrammarBundle gb = load_agg(o);
  std::vector<std::string> tokens;
  {
    auto file = open_input(corpus);
    std::istream& in = file ? *file : std::cin;
    std::string line;
    while (std::getline(in, line))
      for (auto& t : tokenize(maybe_translit(o, line)))
        tokens.push_back(normalize_token(t));
  }
  if (tokens.empty()) {
    std::cout << "0 tokens\n";
    return 0;
  }
  auto timed = [&](auto&& body) {
    auto t0 = std::chrono::steady_clock::now();
    body();
    auto dt = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    return tokens.size() / std::max(dt, 1e-9);
  };
  double uncached = timed([&] {
    for (const auto& t : tokens)
      for (const auto& cd : cds) analyze_token(cd, rs, gb.agg, t);
  });
  std::vector<TokenCache> caches(cds.size());
  double cached = timed([&] {
    for (const auto& t : tokens)
      for (std::size_t i = 0; i < cds.size(); ++i)
        analyze_cached(caches[i], cds[i], rs, gb.agg, t);
  });
  double rtn = timed([&] {
    for (const auto& t : tokens)
      for (const auto& cd : cds) analyze_token_rtn(cd, rs, gb.set, gb.root, t);
  });
  std::cout << tokens.size() << " tokens\n"
            << "uncached  " << uncached << " tokens/s\n"
            << "cached    " << cached << " tokens/s (x"
            << cached / uncached << ")\n"
            << "rtn       " << rtn << " tokens/s (flattened x"
            << uncached / rtn << ")\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arabic full-form dictionary compiler and "
               "omission-tolerant analyzer"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_dict = true) {
    sub->add_option("--rules", o.rules_path, "typo rule file");
    if (with_dict) sub->add_option("--dict", o.dicts, "dictionary (flat or compiled)");
    sub->add_option("--grammar", o.grammar_path, "grammar file");
    sub->add_option("--root", o.root, "root graph name");
    sub->add_option("--mode", o.mode, "tag mode")
        ->check(CLI::IsMember({"semitic", "concat"}));
    sub->add_option("--encoding", o.encoding, "input encoding")
        ->check(CLI::IsMember({"arabic", "tbpp"}));
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"lines", "json"}));
    sub->add_flag("--no-cache", o.no_cache, "disable the token cache");
    sub->add_flag("--no-flatten", o.no_flatten,
                  "interpret the grammar network directly");
  };

  std::string out_path, input_path, lexicon_path;

  auto* compile = app.add_subcommand("compile", "compile a flat dictionary");
  add_common(compile);
  compile->add_option("-o,--output", out_path, "binary output")->required();

  auto* generate = app.add_subcommand("generate", "inflect a lemma lexicon");
  add_common(generate, false);
  generate->add_option("--lexicon", lexicon_path, "lemma lexicon")->required();
  generate->add_option("-o,--output", out_path, "flat dictionary output")
      ->required();

  auto* flatten_cmd = app.add_subcommand("flatten", "inline subgraph calls");
  add_common(flatten_cmd, false);
  flatten_cmd->add_option("-o,--output", out_path, "flattened grammar output")
      ->required();

  auto* analyze = app.add_subcommand("analyze", "annotate tokens");
  add_common(analyze);
  analyze->add_option("input", input_path, "text file (default stdin)");

  auto* restore = app.add_subcommand("restore", "restore vowels");
  add_common(restore);
  restore->add_option("input", input_path, "text file (default stdin)");

  auto* spell = app.add_subcommand("spellcheck", "flag unknown tokens");
  add_common(spell);
  spell->add_option("input", input_path, "text file (default stdin)");

  auto* count = app.add_subcommand("count", "count licensed partial forms");
  add_common(count);

  auto* translit = app.add_subcommand("translit", "convert between encodings");
  add_common(translit, false);
  translit->add_option("input", input_path, "text file (default stdin)");

  auto* bench = app.add_subcommand("bench", "measure analysis throughput");
  add_common(bench);
  bench->add_option("input", input_path, "corpus file (default stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1; // usage errors collapse to 1, --help stays 0
  }

  try {
    if (*compile) return cmd_compile(o, out_path);
    if (*generate) return cmd_generate(o, lexicon_path, out_path);
    if (*flatten_cmd) return cmd_flatten(o, out_path);
    if (*analyze) return cmd_analyze(o, input_path, false);
    if (*restore) return cmd_analyze(o, input_path, true);
    if (*spell) return cmd_spellcheck(o, input_path);
    if (*count) return cmd_count(o);
    if (*translit) return cmd_translit(o, input_path);
    if (*bench) return cmd_bench(o, input_path);
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
