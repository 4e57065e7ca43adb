#include "otdl/madfa.hpp"

#include "oracle.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace otdl;

namespace {

FlatDictionary dict_from(const std::string& text) {
  std::istringstream in(text);
  auto d = parse_flat(in);
  REQUIRE(d.diagnostics.empty());
  return d;
}

std::set<std::string> language(const Madfa& m) {
  std::set<std::string> out;
  m.for_each_surface([&](std::string_view s, const auto&) {
    out.insert(std::string(s));
  });
  return out;
}

} // namespace

TEST_CASE("toy dictionary accepts exactly its surfaces") {
  auto d = dict_from("kataba,ktb.V:aP3ms\n"
                     "kutiba,ktb.V:bP3ms\n"
                     "qamaru,qamar.N:msDN\n");
  auto cd = build(d, TagMode::Semitic);
  CHECK(language(cd.madfa) ==
        std::set<std::string>{"kataba", "kutiba", "qamaru"});
  CHECK(cd.madfa.accepts("ktb").empty());
  auto entries = cd.entries_for("kataba");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].render() == "kataba,ktb.V:aP3ms");
}

TEST_CASE("every entry reconstructs through its INF index") {
  auto d = dict_from("kataba,ktb.V:aP3ms\n"
                     "kAtaba,ktb.V:bP3ms\n"
                     "kitaAbFA,kitaAb.N:msiA\n"
                     "kitaAbN,kitaAb.N:msiN\n"
                     "MGamosu,Mamas.N:fsDN\n");
  for (TagMode mode : {TagMode::Semitic, TagMode::Suffix}) {
    auto cd = build(d, mode);
    for (const auto& e : d.entries) {
      auto got = cd.entries_for(e.surface);
      bool found = false;
      for (const auto& g : got) found = found || g == e;
      CHECK(found);
    }
  }
}

TEST_CASE("homographs keep all their INF indices") {
  auto d = dict_from("ktb,ktb.N:ms\nktb,katab.V:aP3ms\n");
  auto cd = build(d, TagMode::Semitic);
  CHECK(cd.entries_for("ktb").size() == 2);
}

TEST_CASE("state count equals the reference minimizer") {
  auto d = dict_from("kataba,ktb.V:aP3ms\n"
                     "kAtaba,ktb.V:bP3ms\n"
                     "kutiba,ktb.V:bP3ms\n"
                     "katabat,ktb.V:aP3fs\n"
                     "kAtabat,ktb.V:bP3fs\n");
  for (TagMode mode : {TagMode::Semitic, TagMode::Suffix}) {
    auto cd = build(d, mode);
    CHECK(cd.madfa.states.size() ==
          oracle::reference_minimize(oracle::tag_map(d, mode)));
  }
}

TEST_CASE("random suffix-sharing families stay minimal") {
  std::mt19937 rng(23);
  const std::string letters = "ktbmnrs";
  for (int round = 0; round < 20; ++round) {
    std::set<std::string> stems, suffixes;
    while (stems.size() < 30) {
      std::string s;
      for (int i = 0; i < 3 + int(rng() % 3); ++i)
        s.push_back(letters[rng() % letters.size()]);
      stems.insert(s);
    }
    while (suffixes.size() < 8) {
      std::string s;
      for (int i = 0; i < 1 + int(rng() % 3); ++i)
        s.push_back(letters[rng() % letters.size()]);
      suffixes.insert(s);
    }
    std::string text;
    std::set<std::string> words;
    for (const auto& st : stems)
      for (const auto& su : suffixes) {
        words.insert(st + su);
        text += st + su + "," + st + ".N:ms\n";
      }
    auto d = dict_from(text);
    auto cd = build(d, TagMode::Suffix);
    CHECK(language(cd.madfa) == words);
    CHECK(cd.madfa.states.size() ==
          oracle::reference_minimize(oracle::tag_map(d, TagMode::Suffix)));
    // suffix-regular family: INF entries scale with paradigms, not words
    CHECK(cd.inf_table.size() <= suffixes.size() * 4);
  }
}

TEST_CASE("serialization round-trips and is deterministic") {
  auto d = dict_from("kataba,ktb.V:aP3ms\n"
                     "kutiba,ktb.V:bP3ms\n"
                     "qamaru,qamar.N:msDN\n");
  auto cd = build(d, TagMode::Semitic);
  auto bytes = serialize_bytes(cd);
  CHECK(bytes == serialize_bytes(build(d, TagMode::Semitic)));
  auto back = deserialize_bytes(bytes);
  CHECK(back.mode == cd.mode);
  CHECK(back.entry_count == cd.entry_count);
  CHECK(back.inf_table == cd.inf_table);
  CHECK(language(back.madfa) == language(cd.madfa));
  CHECK(serialize_bytes(back) == bytes);
}

TEST_CASE("corrupt files are rejected") {
  auto d = dict_from("kataba,ktb.V:aP3ms\n");
  auto bytes = serialize_bytes(build(d, TagMode::Semitic));
  CHECK_THROWS_AS(deserialize_bytes("LDTO" + bytes.substr(4)), BadMagic);
  std::string vers = bytes;
  vers[4] = 9;
  CHECK_THROWS_AS(deserialize_bytes(vers), VersionMismatch);
  CHECK_THROWS_AS(deserialize_bytes(bytes.substr(0, bytes.size() - 3)),
                  Truncated);
  CHECK_THROWS_AS(deserialize_bytes(bytes.substr(0, 9)), Truncated);
}

TEST_CASE("stats match the structure") {
  auto d = dict_from("kataba,ktb.V:aP3ms\n"
                     "kutiba,ktb.V:bP3ms\n");
  auto cd = build(d, TagMode::Semitic);
  auto s = stats(cd);
  CHECK(s.entries == 2);
  CHECK(s.surfaces == 2);
  CHECK(s.inf_entries == cd.inf_table.size());
  CHECK(s.states == cd.madfa.states.size());
  CHECK(s.transitions == cd.madfa.transition_count());
}
