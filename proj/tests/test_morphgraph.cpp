#include <catch2/catch_amalgamated.hpp>

#include "otdl/morphgraph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace otdl;

namespace {

GrammarSet gs(const std::string& text) {
  std::istringstream ss(text);
  return parse_grammar(ss);
}

GrammarSet fixture_grammar() {
  return load_grammar(OTDL_DATA_DIR "/fixtures/inflect.grammar");
}

LemmaLexicon fixture_lexicon() {
  std::ifstream in(OTDL_DATA_DIR "/fixtures/inflect.lex");
  REQUIRE(in.good());
  return parse_lemma_lexicon(in);
}

} // namespace

TEST_CASE("grammar parsing recovers states, labels and outputs") {
  auto set = gs("# tiny example\n"
                "graph G\n"
                "a -> b : \"ta\" / N:fs   # inline comment\n"
                "b -> c : L\n"
                "c -> d : <LEMMA>\n"
                "d -> e : <3.LEMMA>\n"
                "e -> f : 1u3a5\n"
                "f -> g : :Sub\n"
                "g -> h : <N+Hum:Gp>\n"
                "final h\n"
                "graph Sub\n"
                "x -> y : <E>\n"
                "final y\n");
  REQUIRE(set.count("G") == 1);
  const auto& g = set.at("G");
  CHECK(g.state_names.size() == 8);
  CHECK(g.state_names[g.initial] == "a");
  REQUIRE(g.transitions.size() == 7);
  CHECK(g.transitions[0].label.kind == Label::Kind::Literal);
  CHECK(g.transitions[0].label.text == "ta");
  CHECK(g.transitions[0].output == "N:fs");
  CHECK(g.transitions[1].label.kind == Label::Kind::CursorL);
  CHECK(g.transitions[2].label.kind == Label::Kind::CopyLemmaAll);
  CHECK(g.transitions[3].label.kind == Label::Kind::CopyLemmaFrom);
  CHECK(g.transitions[3].label.k == 3);
  CHECK(g.transitions[4].label.kind == Label::Kind::Pattern);
  CHECK(g.transitions[4].label.text == "1u3a5");
  CHECK(g.transitions[5].label.kind == Label::Kind::Call);
  CHECK(g.transitions[5].label.text == "Sub");
  CHECK(g.transitions[6].label.kind == Label::Kind::Mask);
  CHECK(g.transitions[6].label.mask.render() == "<N+Hum:Gp>");
  CHECK(set.at("Sub").transitions[0].label.render() == "<E>");
}

TEST_CASE("grammar parsing rejects malformed input") {
  CHECK_THROWS_AS(gs("graph G\na -> b : \"x\"\n"), GrammarError); // no final
  CHECK_THROWS_AS(gs("graph G\na -> b : :Nope\nfinal b\n"), UnresolvedSubgraph);
  CHECK_THROWS_AS(gs("a -> b : \"x\"\nfinal b\n"), GrammarError); // outside graph
  CHECK_THROWS_AS(gs("graph G\na -> b : !?\nfinal b\n"), GrammarError);
  CHECK_THROWS_AS(gs("graph G\na -> b \"x\"\nfinal b\n"), GrammarError);
  CHECK_THROWS_AS(gs("graph G\nfinal b\n"), GrammarError); // empty graph
}

TEST_CASE("concatenative cursor semantics") {
  // two L moves then a suffix: nufaAyap -> nufaAyaAtu
  auto set = gs("graph P\n"
                "a -> b : L\n"
                "b -> c : L\n"
                "c -> d : \"aAt\" / N:fp\n"
                "d -> e : \"u\" / DN\n"
                "final e\n");
  auto forms = inflect("nufaAyap", set, "P", TagMode::Suffix);
  REQUIRE(forms.size() == 1);
  CHECK(forms.begin()->first == "nufaAyaAtu");
  CHECK(forms.begin()->second == "N:fpDN");

  // deeper rewrite with a re-emitted radical: laSoqap -> laSaqaAt
  auto set2 = gs("graph P\n"
                 "a -> b : L\n"
                 "b -> c : L\n"
                 "c -> d : L\n"
                 "d -> e : L\n"
                 "e -> f : \"a\"\n"
                 "f -> g : R\n"
                 "g -> h : \"aAt\" / N:fp\n"
                 "final h\n");
  auto forms2 = inflect("laSoqap", set2, "P", TagMode::Suffix);
  REQUIRE(forms2.size() == 1);
  CHECK(forms2.begin()->first == "laSaqaAt");
}

TEST_CASE("Semitic slot semantics") {
  auto set = gs("graph P\n"
                "a -> b : 1u3a5\n"
                "final b\n");
  auto forms = inflect("Euqodap", set, "P", TagMode::Semitic);
  REQUIRE(forms.size() == 1);
  CHECK(forms.begin()->first == "Euqad");

  auto set2 = gs("graph P\n"
                 "a -> b : 1i\n"
                 "b -> c : <3.LEMMA>\n"
                 "final c\n");
  auto forms2 = inflect("nufaAyap", set2, "P", TagMode::Semitic);
  REQUIRE(forms2.size() == 1);
  CHECK(forms2.begin()->first == "nifaAyap");

  // parenthesised slots address positions past 9
  auto set3 = gs("graph P\n"
                 "a -> b : 1a(11)\n"
                 "final b\n");
  auto forms3 = inflect("ktbktbktbkt", set3, "P", TagMode::Semitic);
  CHECK(forms3.begin()->first == "kat");
}

TEST_CASE("cursor and slot errors") {
  auto l = gs("graph P\na -> b : L\nfinal b\n");
  CHECK_THROWS_AS(inflect("", l, "P", TagMode::Suffix), CursorUnderflow);
  auto r = gs("graph P\na -> b : R\nfinal b\n");
  CHECK_THROWS_AS(inflect("x", r, "P", TagMode::Suffix), CursorUnderflow);
  auto s = gs("graph P\na -> b : 7\nfinal b\n");
  CHECK_THROWS_AS(inflect("ktb", s, "P", TagMode::Semitic), SlotOutOfRange);
  auto f = gs("graph P\na -> b : <9.LEMMA>\nfinal b\n");
  CHECK_THROWS_AS(inflect("ktb", f, "P", TagMode::Semitic), SlotOutOfRange);
  // mode mismatches
  CHECK_THROWS_AS(inflect("ktb", l, "P", TagMode::Semitic), GrammarError);
  CHECK_THROWS_AS(inflect("ktb", s, "P", TagMode::Suffix), GrammarError);
}

TEST_CASE("flattening inlines calls without changing the inflection set") {
  auto set = fixture_grammar();
  for (const char* root : {"NF1", "NF2", "NM1"}) {
    MorphGraph flat = flatten(set, root);
    for (const auto& t : flat.transitions)
      CHECK(t.label.kind != Label::Kind::Call);
    const char* lemma = std::string(root) == "NM1" ? "Saliyob" : "nufaAyap";
    auto via_calls = inflect(lemma, set, root, TagMode::Semitic);
    auto via_flat = inflect(lemma, flat, TagMode::Semitic);
    CHECK(via_calls == via_flat);
  }
  MorphGraph flat3 = flatten(set, "NF3");
  CHECK(inflect("laSoqap", set, "NF3", TagMode::Suffix) ==
        inflect("laSoqap", flat3, TagMode::Suffix));
}

TEST_CASE("recursive grammars are rejected") {
  auto self = gs("graph A\nx -> y : :A\nfinal y\n");
  CHECK_THROWS_AS(flatten(self, "A"), RecursiveGrammar);
  auto mutual = gs("graph A\nx -> y : :B\nfinal y\n"
                   "graph B\nx -> y : :A\nfinal y\n");
  CHECK_THROWS_AS(flatten(mutual, "A"), RecursiveGrammar);
}

TEST_CASE("agglutination build accepts slot grammars only") {
  auto agg = load_grammar(OTDL_DATA_DIR "/fixtures/agg.grammar");
  MorphGraph g = build_agglutination(agg, "DWF");
  for (const auto& t : g.transitions)
    CHECK((t.label.kind == Label::Kind::Literal ||
           t.label.kind == Label::Kind::Mask));
  CHECK_THROWS_AS(build_agglutination(fixture_grammar(), "NF1"), GrammarError);
}

TEST_CASE("fixture paradigm of nufaAyap") {
  auto set = fixture_grammar();
  auto forms = inflect("nufaAyap", set, "NF1", TagMode::Semitic);
  CHECK(forms.size() == 54);
  // half the forms take the i variant of the first vowel
  std::size_t i_forms = 0;
  for (const auto& [surf, code] : forms)
    if (surf.rfind("ni", 0) == 0) ++i_forms;
  CHECK(i_forms == 27);
  CHECK(forms.count({"nufaAyaAtu", "N:fpDN"}) == 1);
  CHECK(forms.count({"nufaAyaAtu", "N:fpaN"}) == 1);
  CHECK(forms.count({"nufaAyaAtN", "N:fpiN"}) == 1);
  CHECK(forms.count({"nufaAyaAti", "N:fpDA"}) == 1);
  CHECK(forms.count({"nufaAyaAti", "N:fpaA"}) == 1);
  CHECK(forms.count({"nufaAyaAtK", "N:fpiA"}) == 1);
  CHECK(forms.count({"nufaAyaAti", "N:fpDG"}) == 1);
  CHECK(forms.count({"nufaAyaAti", "N:fpaG"}) == 1);
  CHECK(forms.count({"nufaAyaAtK", "N:fpiG"}) == 1);
  CHECK(forms.count({"nifaAyataAnu", "N:fdDN"}) == 1);
  CHECK(forms.count({"nufaAyapu", "N:fsDN"}) == 1);
}

TEST_CASE("generated dictionary from the fixture lexicon") {
  auto set = fixture_grammar();
  auto lex = fixture_lexicon();
  FlatDictionary d = generate_dictionary(lex, set);
  CHECK(d.diagnostics.empty());

  std::size_t nufaAyap = 0;
  bool salob = false;
  bool sulobaAn = false, silobaAn = false, euqad = false;
  for (const auto& e : d.entries) {
    if (e.lemma == "nufaAyap") ++nufaAyap;
    if (e.surface.rfind("Salob", 0) == 0) salob = true;
    if (e.surface.rfind("SulobaAn", 0) == 0) sulobaAn = true;
    if (e.surface.rfind("SilobaAn", 0) == 0) silobaAn = true;
    if (e.surface.rfind("Euqad", 0) == 0) euqad = true;
    // every generated line round-trips through the entry parser
    auto back = parse_entry(e.render(), 0);
    REQUIRE(back.has_value());
    CHECK(*back == e);
  }
  CHECK(nufaAyap == 54);
  CHECK(sulobaAn);
  CHECK(silobaAn);
  CHECK(euqad);
  CHECK_FALSE(salob); // the broken plural never takes the a vowel

  LemmaLexicon bad;
  bad.rows.push_back({"ktb", "$Missing"});
  CHECK_THROWS_AS(generate_dictionary(bad, set), UnknownClass);
}

TEST_CASE("lemma lexicon parsing") {
  std::istringstream in("ktb,$C1 / a note\n"
                        "\n"
                        "qrO , C2\n");
  auto lex = parse_lemma_lexicon(in);
  REQUIRE(lex.rows.size() == 2);
  CHECK(lex.rows[0].lemma == "ktb");
  CHECK(lex.rows[0].cls == "$C1");
  CHECK(lex.rows[1].lemma == "qrO");
  CHECK(lex.rows[1].cls == "C2");
  std::istringstream bad("justalemma\n");
  CHECK_THROWS_AS(parse_lemma_lexicon(bad), GrammarError);
}
