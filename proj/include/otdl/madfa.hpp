// Minimal acyclic deterministic automaton over surface forms, with final
// states pointing into a deduplicated table of compact tags (INF table).
//
// Construction is incremental over lexicographically sorted input: states
// of the previous word that are no longer on the current path are frozen
// and merged through a register of canonical states, so the automaton is
// minimal when the last word has been added.

#ifndef OTDL_MADFA_HPP
#define OTDL_MADFA_HPP

#include "otdl/compact_tag.hpp"
#include "otdl/lexicon.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace otdl {

struct Madfa {
  struct State {
    bool final = false;
    std::vector<std::uint32_t> inf;                 // sorted
    std::vector<std::pair<char, std::uint32_t>> trans; // sorted by char
  };

  std::vector<State> states;
  std::uint32_t initial = 0;

  const State& state(std::uint32_t id) const { return states[id]; }

  std::int64_t step(std::uint32_t from, char c) const {
    const auto& t = states[from].trans;
    auto it = std::lower_bound(t.begin(), t.end(), c,
                               [](const auto& p, char ch) { return p.first < ch; });
    if (it == t.end() || it->first != c) return -1;
    return it->second;
  }

  std::size_t transition_count() const {
    std::size_t n = 0;
    for (const auto& s : states) n += s.trans.size();
    return n;
  }

  /// INF indices for an exact surface, empty if absent.
  std::vector<std::uint32_t> accepts(std::string_view surface) const {
    std::uint32_t s = initial;
    for (char c : surface) {
      auto next = step(s, c);
      if (next < 0) return {};
      s = static_cast<std::uint32_t>(next);
    }
    return states[s].final ? states[s].inf : std::vector<std::uint32_t>{};
  }

  template <class Fn> void for_each_surface(Fn&& fn) const {
    std::string prefix;
    walk(initial, prefix, fn);
  }

private:
  template <class Fn>
  void walk(std::uint32_t s, std::string& prefix, Fn& fn) const {
    if (states[s].final) fn(static_cast<std::string_view>(prefix), states[s].inf);
    for (const auto& [c, t] : states[s].trans) {
      prefix.push_back(c);
      walk(t, prefix, fn);
      prefix.pop_back();
    }
  }
};

struct CompiledDictionary {
  TagMode mode = TagMode::Semitic;
  std::uint64_t entry_count = 0;
  Madfa madfa;
  std::vector<std::string> inf_table;

  /// All entries stored under an exact surface form.
  std::vector<DictEntry> entries_for(std::string_view surface) const {
    std::vector<DictEntry> out;
    for (auto idx : madfa.accepts(surface)) append_expanded(surface, idx, out);
    return out;
  }

  void append_expanded(std::string_view surface, std::uint32_t inf_index,
                       std::vector<DictEntry>& out) const {
    std::string full = std::string(surface) + "," +
                       expand_compact_tag(surface, inf_table[inf_index], mode);
    auto e = parse_entry(full, 0);
    if (!e) throw std::runtime_error("corrupt INF entry: " + full);
    out.push_back(std::move(*e));
  }
};

namespace detail {

class MadfaBuilder {
public:
  explicit MadfaBuilder(Madfa& out) : out_(out) {
    out_.states.clear();
    out_.states.emplace_back();
    path_.push_back(0);
  }

  // Words must arrive in strict lexicographic order.
  void add(std::string_view word, std::vector<std::uint32_t> inf) {
    std::size_t common = 0;
    while (common < word.size() && common < last_.size() &&
           word[common] == last_[common])
      ++common;
    freeze_from(common + 1);
    std::uint32_t s = path_[common];
    for (std::size_t i = common; i < word.size(); ++i) {
      std::uint32_t child = static_cast<std::uint32_t>(out_.states.size());
      out_.states.emplace_back();
      out_.states[s].trans.emplace_back(word[i], child);
      path_.push_back(child);
      s = child;
    }
    std::sort(inf.begin(), inf.end());
    inf.erase(std::unique(inf.begin(), inf.end()), inf.end());
    out_.states[s].final = true;
    out_.states[s].inf = std::move(inf);
    last_.assign(word.begin(), word.end());
  }

  void finish() {
    freeze_from(1);
    compact();
  }

private:
  // Registers path states at depth >= d (bottom-up), redirecting their
  // parents to canonical equivalents.
  void freeze_from(std::size_t d) {
    while (path_.size() > d) {
      std::uint32_t child = path_.back();
      path_.pop_back();
      std::uint32_t parent = path_.back();
      std::string sig = signature(child);
      auto [it, inserted] = register_.emplace(std::move(sig), child);
      if (!inserted) out_.states[parent].trans.back().second = it->second;
    }
  }

  std::string signature(std::uint32_t s) const {
    const auto& st = out_.states[s];
    std::string sig;
    sig.push_back(st.final ? 'F' : '-');
    for (auto i : st.inf) {
      sig.append(reinterpret_cast<const char*>(&i), sizeof(i));
    }
    sig.push_back('|');
    for (const auto& [c, t] : st.trans) {
      sig.push_back(c);
      sig.append(reinterpret_cast<const char*>(&t), sizeof(t));
    }
    return sig;
  }

  // Drops states orphaned by registration and renumbers reachable ones.
  void compact() {
    std::vector<std::uint32_t> remap(out_.states.size(),
                                     std::uint32_t(-1));
    std::vector<Madfa::State> kept;
    renumber(0, remap, kept);
    for (auto& st : kept)
      for (auto& [c, t] : st.trans) t = remap[t];
    out_.states = std::move(kept);
    out_.initial = remap.empty() ? 0 : remap[0];
  }

  void renumber(std::uint32_t s, std::vector<std::uint32_t>& remap,
                std::vector<Madfa::State>& kept) {
    if (remap[s] != std::uint32_t(-1)) return;
    remap[s] = static_cast<std::uint32_t>(kept.size());
    kept.push_back(out_.states[s]);
    for (const auto& [c, t] : out_.states[s].trans)
      renumber(t, remap, kept);
  }

  Madfa& out_;
  std::vector<std::uint32_t> path_;
  std::string last_;
  std::unordered_map<std::string, std::uint32_t> register_;
};

} // namespace detail

/// Compiles a validated flat dictionary.  Identical input bytes yield an
/// identical automaton and INF table.
inline CompiledDictionary build(const FlatDictionary& dict, TagMode mode) {
  CompiledDictionary cd;
  cd.mode = mode;
  cd.entry_count = dict.entries.size();

  // surface -> tag strings, lexicographically ordered
  std::map<std::string, std::vector<std::string>, std::less<>> by_surface;
  for (const auto& e : dict.entries) {
    by_surface[e.surface].push_back(
        compute_compact_tag(e.surface, e.lemma, e.annotation(), mode));
  }

  std::unordered_map<std::string, std::uint32_t> inf_index;
  detail::MadfaBuilder builder(cd.madfa);
  for (auto& [surface, tags] : by_surface) {
    std::vector<std::uint32_t> inf;
    for (auto& tag : tags) {
      auto [it, inserted] =
          inf_index.emplace(tag, static_cast<std::uint32_t>(cd.inf_table.size()));
      if (inserted) cd.inf_table.push_back(tag);
      inf.push_back(it->second);
    }
    builder.add(surface, std::move(inf));
  }
  builder.finish();
  return cd;
}

struct DictionaryStats {
  std::uint64_t entries = 0;
  std::uint64_t surfaces = 0;
  std::uint64_t inf_entries = 0;
  std::uint64_t states = 0;
  std::uint64_t transitions = 0;
};

inline DictionaryStats stats(const CompiledDictionary& cd) {
  DictionaryStats s;
  s.entries = cd.entry_count;
  cd.madfa.for_each_surface([&](std::string_view, const auto&) { ++s.surfaces; });
  s.inf_entries = cd.inf_table.size();
  s.states = cd.madfa.states.size();
  s.transitions = cd.madfa.transition_count();
  return s;
}

// ---------------------------------------------------------------------------
// Binary format (little-endian, version 1):
//   "OTDL"  u32 version  u8 mode  u64 entries  u32 inf_count
//   u32 state_count  u64 transition_count  u32 initial
//   INF table: inf_count x (u32 length, bytes)
//   states: u8 flags(bit0 final), if final u32 n + n x u32 inf index,
//           u8 transition count, per transition u8 char + zigzag varint
//           (target - state index)
// ---------------------------------------------------------------------------

struct SerializationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadMagic : SerializationError {
  BadMagic() : SerializationError("bad magic, not an OTDL dictionary") {}
};
struct VersionMismatch : SerializationError {
  VersionMismatch() : SerializationError("unsupported OTDL format version") {}
};
struct Truncated : SerializationError {
  Truncated() : SerializationError("truncated OTDL dictionary file") {}
};

namespace detail {

template <class T> void put(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
}

inline void put_varint(std::string& out, std::int64_t sv) {
  auto v = static_cast<std::uint64_t>((sv << 1) ^ (sv >> 63)); // zigzag
  do {
    auto b = static_cast<std::uint8_t>(v & 0x7F);
    v >>= 7;
    if (v) b |= 0x80;
    out.push_back(static_cast<char>(b));
  } while (v);
}

struct Reader {
  std::string_view data;
  std::size_t pos = 0;

  template <class T> T get() {
    if (pos + sizeof(T) > data.size()) throw Truncated();
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += sizeof(T);
    return static_cast<T>(v);
  }

  std::int64_t get_varint() {
    std::uint64_t v = 0;
    int shift = 0;
    while (true) {
      if (pos >= data.size()) throw Truncated();
      auto b = static_cast<std::uint8_t>(data[pos++]);
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if (!(b & 0x80)) break;
      shift += 7;
    }
    return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
  }

  std::string_view get_bytes(std::size_t n) {
    if (pos + n > data.size()) throw Truncated();
    auto s = data.substr(pos, n);
    pos += n;
    return s;
  }
};

} // namespace detail

inline std::string serialize_bytes(const CompiledDictionary& cd) {
  std::string out = "OTDL";
  detail::put<std::uint32_t>(out, 1);
  detail::put<std::uint8_t>(out, cd.mode == TagMode::Semitic ? 1 : 0);
  detail::put<std::uint64_t>(out, cd.entry_count);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(cd.inf_table.size()));
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(cd.madfa.states.size()));
  detail::put<std::uint64_t>(out, cd.madfa.transition_count());
  detail::put<std::uint32_t>(out, cd.madfa.initial);
  for (const auto& tag : cd.inf_table) {
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(tag.size()));
    out += tag;
  }
  std::uint32_t id = 0;
  for (const auto& st : cd.madfa.states) {
    detail::put<std::uint8_t>(out, st.final ? 1 : 0);
    if (st.final) {
      detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(st.inf.size()));
      for (auto i : st.inf) detail::put<std::uint32_t>(out, i);
    }
    detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(st.trans.size()));
    for (const auto& [c, t] : st.trans) {
      detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(c));
      detail::put_varint(out, static_cast<std::int64_t>(t) -
                                  static_cast<std::int64_t>(id));
    }
    ++id;
  }
  return out;
}

inline CompiledDictionary deserialize_bytes(std::string_view data) {
  detail::Reader r{data};
  if (r.get_bytes(4) != "OTDL") throw BadMagic();
  if (r.get<std::uint32_t>() != 1) throw VersionMismatch();
  CompiledDictionary cd;
  cd.mode = r.get<std::uint8_t>() ? TagMode::Semitic : TagMode::Suffix;
  cd.entry_count = r.get<std::uint64_t>();
  auto inf_count = r.get<std::uint32_t>();
  auto state_count = r.get<std::uint32_t>();
  auto transition_count = r.get<std::uint64_t>();
  cd.madfa.initial = r.get<std::uint32_t>();
  cd.inf_table.reserve(inf_count);
  for (std::uint32_t i = 0; i < inf_count; ++i) {
    auto len = r.get<std::uint32_t>();
    cd.inf_table.emplace_back(r.get_bytes(len));
  }
  cd.madfa.states.resize(state_count);
  std::uint64_t seen_transitions = 0;
  for (std::uint32_t id = 0; id < state_count; ++id) {
    auto& st = cd.madfa.states[id];
    st.final = r.get<std::uint8_t>() != 0;
    if (st.final) {
      auto n = r.get<std::uint32_t>();
      st.inf.reserve(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        auto idx = r.get<std::uint32_t>();
        if (idx >= inf_count) throw Truncated();
        st.inf.push_back(idx);
      }
    }
    auto n = r.get<std::uint8_t>();
    st.trans.reserve(n);
    for (std::uint8_t i = 0; i < n; ++i) {
      char c = static_cast<char>(r.get<std::uint8_t>());
      auto target = static_cast<std::int64_t>(id) + r.get_varint();
      if (target < 0 || target >= static_cast<std::int64_t>(state_count))
        throw Truncated();
      st.trans.emplace_back(c, static_cast<std::uint32_t>(target));
    }
    seen_transitions += n;
  }
  if (seen_transitions != transition_count) throw Truncated();
  return cd;
}

inline void serialize(const CompiledDictionary& cd, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SerializationError("cannot write: " + path);
  auto bytes = serialize_bytes(cd);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SerializationError("write failed: " + path);
}

inline CompiledDictionary deserialize(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerializationError("cannot open: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return deserialize_bytes(data);
}

} // namespace otdl

#endif // OTDL_MADFA_HPP
