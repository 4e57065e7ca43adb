#include "otdl/lexicon.hpp"
#include "otdl/morphgraph.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

using namespace otdl;

TEST_CASE("parse_entry on the canonical example") {
  auto e = parse_entry("takotubu,ktb.V:aI3fsN", 1);
  REQUIRE(e);
  CHECK(e->surface == "takotubu");
  CHECK(e->lemma == "ktb");
  CHECK(e->pos == "V");
  REQUIRE(e->infl_codes.size() == 1);
  CHECK(e->infl_codes[0] == "aI3fsN");
}

TEST_CASE("comments and blanks yield nothing") {
  std::vector<ParseDiagnostic> d;
  CHECK_FALSE(parse_entry("/ a comment line", 1, &d));
  CHECK_FALSE(parse_entry("", 2, &d));
  CHECK_FALSE(parse_entry("   ", 3, &d));
  CHECK(d.empty());
}

TEST_CASE("generated plural entry parses") {
  auto e = parse_entry("nufaAyaAtu,nufaAyap.N:fpDN", 1);
  REQUIRE(e);
  CHECK(e->pos == "N");
  CHECK(e->infl_codes[0] == "fpDN");
}

TEST_CASE("semantic features and several codes") {
  auto e = parse_entry("bihaA,bi.PREP+pro+Gen", 1);
  REQUIRE(e);
  CHECK(e->has_sem("pro"));
  CHECK(e->has_sem("Gen"));
  auto f = parse_entry("x,x.N:msDN:msDA", 1);
  REQUIRE(f);
  CHECK(f->infl_codes.size() == 2);
}

TEST_CASE("malformed entries are diagnosed and skipped") {
  std::vector<ParseDiagnostic> d;
  CHECK_FALSE(parse_entry("no-comma-or-dot", 4, &d));
  CHECK_FALSE(parse_entry("x,y.QQQ:ms", 5, &d));
  CHECK_FALSE(parse_entry("x,y.N:msZ9", 6, &d));
  CHECK_FALSE(parse_entry("x,y.V+pro+nopro:aP3ms", 7, &d));
  REQUIRE(d.size() == 4);
  CHECK(d[0].kind == ParseDiagnostic::MalformedEntry);
  CHECK(d[1].kind == ParseDiagnostic::UnknownPos);
  CHECK(d[2].kind == ParseDiagnostic::UnknownFeatureChar);
  CHECK(d[1].line == 5);
}

TEST_CASE("render round-trips") {
  for (const char* line :
       {"takotubu,ktb.V:aI3fsN", "qamaru,qamar.N:msDN",
        "bihaA,bi.PREP+pro+Gen", "x,y.NPr+Loc:fsDN", "w,w.CONJC"}) {
    auto e = parse_entry(line, 1);
    REQUIRE(e);
    auto again = parse_entry(e->render(), 1);
    REQUIRE(again);
    CHECK(*again == *e);
  }
}

TEST_CASE("masks parse") {
  auto m = parse_mask("<V:aI3mp>");
  REQUIRE(m);
  CHECK(m->pos == "V");
  REQUIRE(m->groups.size() == 1);
  CHECK(m->groups[0] == "aI3mp");

  auto n = parse_mask("<N>");
  REQUIRE(n);
  CHECK(n->groups.empty());

  auto p = parse_mask("<PRO+Ppers+Acc:3fs>");
  REQUIRE(p);
  CHECK(p->sem_features == std::vector<std::string>{"Ppers", "Acc"});
  CHECK(p->groups[0] == "3fs");

  auto l = parse_mask("<katab.V:aP>");
  REQUIRE(l);
  CHECK(l->lemma == "katab");

  CHECK_FALSE(parse_mask("<>"));
  CHECK_FALSE(parse_mask("no-brackets"));
}

TEST_CASE("mask matching semantics") {
  auto e = parse_entry("x,y.N:fpDG", 1);
  REQUIRE(e);
  CHECK(mask_matches(*parse_mask("<N:G>"), *e));
  CHECK(mask_matches(*parse_mask("<N>"), *e));
  CHECK(mask_matches(*parse_mask("<N:Gpf>"), *e)); // order-insensitive
  CHECK_FALSE(mask_matches(*parse_mask("<N:N>"), *e));
  CHECK_FALSE(mask_matches(*parse_mask("<V:G>"), *e));
  CHECK(mask_matches(*parse_mask("<y.N>"), *e));
  CHECK_FALSE(mask_matches(*parse_mask("<z.N>"), *e));

  auto pro = parse_entry("x,y.V+pro:aP3ms", 1);
  REQUIRE(pro);
  CHECK_FALSE(mask_matches(*parse_mask("<V+nopro:aP>"), *pro));
  CHECK(mask_matches(*parse_mask("<V+pro>"), *pro));
}

TEST_CASE("mask matching is monotone in group features") {
  auto e = parse_entry("x,y.N:fpDG", 1);
  REQUIRE(e);
  std::string g = "fpDG";
  for (std::size_t drop = 0; drop < g.size(); ++drop) {
    std::string smaller = g;
    smaller.erase(drop, 1);
    LexicalMask full = *parse_mask("<N:" + g + ">");
    LexicalMask less = *parse_mask("<N:" + smaller + ">");
    if (mask_matches(full, *e)) CHECK(mask_matches(less, *e));
  }
}

TEST_CASE("the genitive mask selects 18 of a 54-form paradigm") {
  // 54 forms: 2 variants x 3 numbers x 9 case/definiteness codes
  std::vector<DictEntry> paradigm;
  const char* numbers[] = {"fs", "fd", "fp"};
  const char* defs[] = {"D", "a", "i"};
  const char* cases[] = {"N", "A", "G"};
  // letter-only surface encodings keep parse_entry happy
  std::map<std::string, std::string> enc{{"fs", "b"}, {"fd", "t"}, {"fp", "v"},
                                         {"D", "d"},  {"a", "r"},  {"i", "z"},
                                         {"N", "n"},  {"A", "m"},  {"G", "l"}};
  for (int variant = 0; variant < 2; ++variant)
    for (const char* num : numbers)
      for (const char* d : defs)
        for (const char* c : cases) {
          std::string surface = std::string(variant ? "k" : "q") + enc[num] +
                                enc[d] + enc[c];
          std::string line = surface + ",jurnaAlist.N:" + num + d + c;
          auto e = parse_entry(line, 1);
          REQUIRE(e);
          paradigm.push_back(*e);
        }
  auto mask = *parse_mask("<jurnaAlist.N:G>");
  int matched = 0;
  for (const auto& e : paradigm)
    if (mask_matches(mask, e)) ++matched;
  CHECK(matched == 18);
}

TEST_CASE("flat dictionaries collapse identical lines, keep homographs") {
  std::istringstream in("ktb,ktb.N:ms\n"
                        "ktb,ktb.N:ms\n"
                        "ktb,katab.V:aP3ms\n"
                        "/ comment\n"
                        "broken line\n");
  auto d = parse_flat(in);
  CHECK(d.entries.size() == 2);
  REQUIRE(d.diagnostics.size() == 1);
  CHECK(d.diagnostics[0].line == 5);
}
