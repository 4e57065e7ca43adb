#include "otdl/alphabet.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace otdl;

TEST_CASE("transliteration table is a bijection") {
  std::set<char32_t> arabic;
  std::set<char> latin;
  for (const auto& row : detail::kTranslitTable) {
    CHECK(arabic.insert(row.arabic).second);
    CHECK(latin.insert(row.tbpp).second);
  }
  CHECK(arabic.size() == detail::kTranslitTable.size());
}

TEST_CASE("round-trip over every table row") {
  for (const auto& row : detail::kTranslitTable) {
    std::string utf8;
    detail::encode_utf8(row.arabic, utf8);
    auto t = to_translit(utf8);
    REQUIRE(t.text == std::string(1, row.tbpp));
    CHECK(t.uncovered.empty());
    CHECK(from_translit(t.text).text == utf8);
  }
}

TEST_CASE("kataba converts both ways") {
  const std::string arabic = "كَتَبَ";
  CHECK(to_translit(arabic).text == "kataba");
  CHECK(from_translit("kataba").text == arabic);
}

TEST_CASE("empty input") {
  CHECK(to_translit("").text.empty());
  CHECK(from_translit("").text.empty());
}

TEST_CASE("uncovered characters pass through with a report") {
  auto r = to_translit("abc ۱");
  CHECK(r.text.find("abc") != std::string::npos);
  CHECK(r.uncovered.size() == 1);
}

TEST_CASE("classification is total and consistent") {
  CHECK(classify('G') == CharClass::Shadda);
  CHECK(classify('R') == CharClass::SuperscriptAlef);
  CHECK(classify('k') == CharClass::BareLetter);
  CHECK(classify('o') == CharClass::ZeroVowel);
  CHECK(classify('L') == CharClass::WaslaAlef);
  int diacritics = 0;
  for (int c = 0; c < 128; ++c)
    if (is_diacritic(static_cast<char>(c))) ++diacritics;
  CHECK(diacritics == 9);
}

TEST_CASE("coronal and lunar sets partition the consonants") {
  int coronal = 0;
  for (int c = 0; c < 128; ++c) {
    char ch = static_cast<char>(c);
    if (is_coronal(ch)) {
      ++coronal;
      CHECK(is_tbpp_letter(ch));
      CHECK_FALSE(is_lunar(ch));
    }
  }
  CHECK(coronal == 15);
}

TEST_CASE("strip_diacritics and reinsert") {
  auto s = strip_diacritics("kataba");
  CHECK(s.skeleton == "ktb");
  REQUIRE(s.diacritics.size() == 3);
  CHECK(s.diacritics[0].offset == 1);
  CHECK(reinsert(s) == "kataba");

  CHECK(strip_diacritics("ktb").skeleton == "ktb");
  CHECK(strip_diacritics("katGaba").skeleton == "ktb");
  CHECK(reinsert(strip_diacritics("katGaba")) == "katGaba");

  for (char c : strip_diacritics("IiEoraAbN").skeleton)
    CHECK_FALSE(is_diacritic(c));
}

TEST_CASE("normalize_token strips tatweel and squeezes spaces") {
  CHECK(normalize_token("kt_Ab") == "ktAb");
  CHECK(normalize_token("ktb") == "ktb");
  CHECK(normalize_token("  a  b ") == "a b");
}

TEST_CASE("normalize_token is idempotent on random strings") {
  std::mt19937 rng(7);
  const std::string pool = "ktb aui_ GAR\tmn";
  for (int it = 0; it < 500; ++it) {
    std::string s;
    for (int i = 0; i < 12; ++i)
      s.push_back(pool[rng() % pool.size()]);
    CHECK(normalize_token(normalize_token(s)) == normalize_token(s));
  }
}
