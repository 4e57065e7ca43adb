// Character model for Arabic script in the TB++ transliteration.
//
// TB++ maps each Arabic codepoint to one Latin character, so every rule,
// dictionary surface and grammar label in this library is a plain byte
// string.  Arabic Unicode is converted only at the boundary.
//
// Extensions over the base table: the wasla alef is assigned 'L' and the
// tatweel justification character is assigned '_' (stripped by
// normalize_token, never present in dictionary data).

#ifndef OTDL_ALPHABET_HPP
#define OTDL_ALPHABET_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace otdl {

enum class CharClass {
  BareLetter,
  ShortVowel,      // a u i
  ZeroVowel,       // o (sukun)
  Nunation,        // F N K
  Shadda,          // G
  SuperscriptAlef, // R
  HamzaAboveAlef,  // O
  HamzaBelowAlef,  // I
  BareAlef,        // A
  WaslaAlef,       // L
};

namespace detail {

struct TranslitRow {
  char32_t arabic;
  char tbpp;
};

inline constexpr std::array<TranslitRow, 46> kTranslitTable = {{
    {U'ء', 'c'}, // hamza
    {U'آ', 'C'}, // alef madda
    {U'أ', 'O'}, // alef hamza above
    {U'ؤ', 'W'}, // waw hamza
    {U'إ', 'I'}, // alef hamza below
    {U'ئ', 'e'}, // yeh hamza
    {U'ا', 'A'}, // alef
    {U'ب', 'b'}, {U'ة', 'p'}, {U'ت', 't'}, {U'ث', 'v'},
    {U'ج', 'j'}, {U'ح', 'H'}, {U'خ', 'x'}, {U'د', 'd'},
    {U'ذ', 'J'}, {U'ر', 'r'}, {U'ز', 'z'}, {U'س', 's'},
    {U'ش', 'M'}, {U'ص', 'S'}, {U'ض', 'D'}, {U'ط', 'T'},
    {U'ظ', 'Z'}, {U'ع', 'E'}, {U'غ', 'g'}, {U'ف', 'f'},
    {U'ق', 'q'}, {U'ك', 'k'}, {U'ل', 'l'}, {U'م', 'm'},
    {U'ن', 'n'}, {U'ه', 'h'}, {U'و', 'w'}, {U'ى', 'Y'},
    {U'ي', 'y'},
    {U'ً', 'F'}, // fathatan
    {U'ٌ', 'N'}, // dammatan
    {U'ٍ', 'K'}, // kasratan
    {U'َ', 'a'}, // fatha
    {U'ُ', 'u'}, // damma
    {U'ِ', 'i'}, // kasra
    {U'ّ', 'G'}, // shadda
    {U'ْ', 'o'}, // sukun
    {U'ٰ', 'R'}, // superscript alef
    {U'ٱ', 'L'}, // wasla alef (extension)
}};

inline constexpr char32_t kTatweel = U'ـ';

// UTF-8 decode of one codepoint; returns (codepoint, bytes consumed).
// Invalid bytes are returned as-is, one byte at a time.
inline std::pair<char32_t, std::size_t> decode_utf8(std::string_view s) {
  const auto b0 = static_cast<unsigned char>(s[0]);
  std::size_t len = 1;
  char32_t cp = b0;
  if (b0 >= 0xF0)
    len = 4, cp = b0 & 0x07u;
  else if (b0 >= 0xE0)
    len = 3, cp = b0 & 0x0Fu;
  else if (b0 >= 0xC0)
    len = 2, cp = b0 & 0x1Fu;
  if (len > s.size()) return {b0, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[i]);
    if ((b & 0xC0u) != 0x80u) return {b0, 1};
    cp = (cp << 6) | (b & 0x3Fu);
  }
  return {cp, len};
}

inline void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

} // namespace detail

/// The nine optional marks plus the superscript alef: a u i o F N K G R.
inline constexpr bool is_diacritic(char c) {
  switch (c) {
  case 'a': case 'u': case 'i': case 'o':
  case 'F': case 'N': case 'K':
  case 'G': case 'R':
    return true;
  default:
    return false;
  }
}

inline constexpr bool is_short_vowel(char c) {
  return c == 'a' || c == 'u' || c == 'i';
}

inline constexpr bool is_nunation(char c) {
  return c == 'F' || c == 'N' || c == 'K';
}

inline constexpr bool is_tbpp_letter(char c) {
  switch (c) {
  case 'c': case 'C': case 'O': case 'W': case 'I': case 'e': case 'A':
  case 'b': case 'p': case 't': case 'v': case 'j': case 'H': case 'x':
  case 'd': case 'J': case 'r': case 'z': case 's': case 'M': case 'S':
  case 'D': case 'T': case 'Z': case 'E': case 'g': case 'f': case 'q':
  case 'k': case 'l': case 'm': case 'n': case 'h': case 'w': case 'Y':
  case 'y': case 'L':
    return true;
  default:
    return false;
  }
}

/// The 15 consonants that admit assimilation of the determiner's l.
inline constexpr bool is_coronal(char c) {
  switch (c) {
  case 't': case 'v': case 'j': case 'd': case 'J': case 'r': case 'z':
  case 's': case 'M': case 'S': case 'D': case 'T': case 'Z': case 'l':
  case 'n':
    return true;
  default:
    return false;
  }
}

inline constexpr bool is_lunar(char c) {
  return is_tbpp_letter(c) && !is_coronal(c);
}

inline constexpr CharClass classify(char c) {
  switch (c) {
  case 'a': case 'u': case 'i': return CharClass::ShortVowel;
  case 'o': return CharClass::ZeroVowel;
  case 'F': case 'N': case 'K': return CharClass::Nunation;
  case 'G': return CharClass::Shadda;
  case 'R': return CharClass::SuperscriptAlef;
  case 'O': return CharClass::HamzaAboveAlef;
  case 'I': return CharClass::HamzaBelowAlef;
  case 'A': return CharClass::BareAlef;
  case 'L': return CharClass::WaslaAlef;
  default: return CharClass::BareLetter;
  }
}

struct TranslitResult {
  std::string text;
  std::vector<char32_t> uncovered; // passed through unchanged
};

/// Arabic Unicode -> TB++.  Characters outside the table pass through.
inline TranslitResult to_translit(std::string_view arabic) {
  TranslitResult r;
  std::size_t i = 0;
  while (i < arabic.size()) {
    auto [cp, len] = detail::decode_utf8(arabic.substr(i));
    i += len;
    if (cp == detail::kTatweel) {
      r.text.push_back('_');
      continue;
    }
    bool found = false;
    for (const auto& row : detail::kTranslitTable) {
      if (row.arabic == cp) {
        r.text.push_back(row.tbpp);
        found = true;
        break;
      }
    }
    if (!found) {
      if (cp >= 0x600 && cp <= 0x6FF) r.uncovered.push_back(cp);
      detail::encode_utf8(cp, r.text);
    }
  }
  return r;
}

/// TB++ -> Arabic Unicode, the inverse of to_translit.
inline TranslitResult from_translit(std::string_view tbpp) {
  TranslitResult r;
  for (char c : tbpp) {
    if (c == '_') {
      detail::encode_utf8(detail::kTatweel, r.text);
      continue;
    }
    bool found = false;
    for (const auto& row : detail::kTranslitTable) {
      if (row.tbpp == c) {
        detail::encode_utf8(row.arabic, r.text);
        found = true;
        break;
      }
    }
    if (!found) r.text.push_back(c);
  }
  return r;
}

struct DiacriticPos {
  char mark;
  std::size_t offset; // offset in the original form
};

struct Skeleton {
  std::string skeleton;
  std::vector<DiacriticPos> diacritics;
};

/// Splits a form into its bare-letter skeleton and the removed marks with
/// their original offsets; reinsert() reconstructs the input.
inline Skeleton strip_diacritics(std::string_view form) {
  Skeleton s;
  for (std::size_t i = 0; i < form.size(); ++i) {
    if (is_diacritic(form[i]))
      s.diacritics.push_back({form[i], i});
    else
      s.skeleton.push_back(form[i]);
  }
  return s;
}

inline std::string reinsert(const Skeleton& s) {
  std::string out = s.skeleton;
  for (const auto& d : s.diacritics) out.insert(out.begin() + d.offset, d.mark);
  return out;
}

/// Trims tatweel and collapses surrounding whitespace runs.
inline std::string normalize_token(std::string_view token) {
  std::string out;
  bool in_space = false;
  for (char c : token) {
    if (c == '_') continue;
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      in_space = !out.empty();
      continue;
    }
    if (in_space) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

} // namespace otdl

#endif // OTDL_ALPHABET_HPP
