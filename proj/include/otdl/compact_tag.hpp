// Compact tags: per-entry instruction strings that rebuild lemma and codes
// from the surface form, so that many entries share one tag.
//
// Suffix mode ("looks"/"look" -> "1.V:P3s"): remove N letters from the end
// of the surface, append a literal, append the annotation.
//
// Semitic mode ("takotubu"/"ktb" -> "246.V:aI3fsN"): each digit copies the
// surface letter at that 0-based position; other characters are literals.
//
// Positions >= 10 are written "(NN)"; a literal that is itself a digit,
// backslash or parenthesis is escaped with a backslash.  Textual INF
// listings may prefix Semitic tags with "__"; leading underscores are
// ignored when expanding.

#ifndef OTDL_COMPACT_TAG_HPP
#define OTDL_COMPACT_TAG_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace otdl {

enum class TagMode { Suffix, Semitic };

struct TagIndexError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void append_position(std::string& out, std::size_t k) {
  if (k <= 9) {
    out.push_back(static_cast<char>('0' + k));
  } else {
    out.push_back('(');
    out += std::to_string(k);
    out.push_back(')');
  }
}

inline void append_literal(std::string& out, char c) {
  if ((c >= '0' && c <= '9') || c == '\\' || c == '(' || c == ')')
    out.push_back('\\');
  out.push_back(c);
}

} // namespace detail

/// Best Semitic body for (surface, lemma): maximizes copied letters, ties
/// broken by the lexicographically smallest index sequence.
inline std::string semitic_tag_body(std::string_view surface,
                                    std::string_view lemma) {
  const std::size_t n = lemma.size(), m = surface.size();
  // best[i][j]: max letters copyable aligning lemma[i..] against
  // surface[j..] with strictly increasing positions.
  std::vector<std::vector<int>> best(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      int v = best[i + 1][j];              // lemma[i] as literal
      if (best[i][j + 1] > v) v = best[i][j + 1]; // skip surface[j]
      if (lemma[i] == surface[j] && 1 + best[i + 1][j + 1] > v)
        v = 1 + best[i + 1][j + 1];
      best[i][j] = v;
    }
  }
  std::string body;
  std::size_t i = 0, j = 0;
  while (i < n) {
    if (j < m && lemma[i] == surface[j] &&
        1 + best[i + 1][j + 1] == best[i][j]) {
      detail::append_position(body, j);
      ++i, ++j;
    } else if (best[i + 1][j] == best[i][j]) {
      detail::append_literal(body, lemma[i]);
      ++i;
    } else {
      ++j; // a later surface position carries the next copy
    }
  }
  return body;
}

/// Suffix body: keep the longest common prefix, remove the rest, append
/// the lemma's tail.
inline std::string suffix_tag_body(std::string_view surface,
                                   std::string_view lemma) {
  std::size_t common = 0;
  while (common < surface.size() && common < lemma.size() &&
         surface[common] == lemma[common])
    ++common;
  std::string body;
  detail::append_position(body, surface.size() - common);
  for (std::size_t k = common; k < lemma.size(); ++k)
    detail::append_literal(body, lemma[k]);
  return body;
}

inline std::string compute_compact_tag(std::string_view surface,
                                       std::string_view lemma,
                                       std::string_view annotation,
                                       TagMode mode) {
  std::string tag = mode == TagMode::Semitic ? semitic_tag_body(surface, lemma)
                                             : suffix_tag_body(surface, lemma);
  tag.append(annotation);
  return tag;
}

/// Inverse of compute_compact_tag: rebuilds "lemma.annotation".
inline std::string expand_compact_tag(std::string_view surface,
                                      std::string_view tag, TagMode mode) {
  std::size_t p = 0;
  while (p < tag.size() && tag[p] == '_') ++p; // textual mode marker

  auto read_position = [&]() -> std::size_t {
    if (tag[p] == '(') {
      std::size_t close = tag.find(')', p);
      if (close == std::string_view::npos)
        throw TagIndexError("unterminated position in tag");
      std::size_t k = std::stoul(std::string(tag.substr(p + 1, close - p - 1)));
      p = close + 1;
      return k;
    }
    return static_cast<std::size_t>(tag[p++] - '0');
  };

  std::string lemma;
  bool first = true;
  std::size_t remove_count = 0;
  while (p < tag.size() && tag[p] != '.') {
    char c = tag[p];
    if (c == '\\') {
      if (p + 1 >= tag.size()) throw TagIndexError("dangling escape in tag");
      lemma.push_back(tag[p + 1]);
      p += 2;
    } else if ((c >= '0' && c <= '9') || c == '(') {
      std::size_t k = read_position();
      if (mode == TagMode::Suffix) {
        if (!first) throw TagIndexError("misplaced count in suffix tag");
        if (k > surface.size()) throw TagIndexError("remove count exceeds surface");
        remove_count = k;
        lemma.assign(surface.substr(0, surface.size() - k));
      } else {
        if (k >= surface.size()) throw TagIndexError("copy index exceeds surface");
        lemma.push_back(surface[k]);
      }
    } else {
      if (mode == TagMode::Suffix && first)
        throw TagIndexError("suffix tag must start with a count");
      lemma.push_back(c);
      ++p;
      first = false;
      continue;
    }
    first = false;
  }
  (void)remove_count;
  lemma.append(tag.substr(p));
  return lemma;
}

} // namespace otdl

#endif // OTDL_COMPACT_TAG_HPP
