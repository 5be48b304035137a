#ifndef LEXACQ_TYPES_HPP
#define LEXACQ_TYPES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "symbols.hpp"

namespace lexacq {

using PhonemeSeq = std::vector<PhonemeId>;
/// Sorted by id, no repeats.
using SememeSet = std::vector<SememeId>;

struct SememeCount {
  SememeId sememe;
  std::uint32_t multiplicity = 1;

  auto operator<=>(const SememeCount&) const = default;
};

/// An unsegmented phoneme sequence paired with a bag of sememes. The bag is
/// stored as distinct sememes sorted by id; slot j of every sememe-indexed
/// vector (SM, delta_s, targets) refers to sememes[j].
struct Utterance {
  PhonemeSeq phonemes;
  std::vector<SememeCount> sememes;
  std::string source_line;

  std::size_t sememe_slot_count() const noexcept { return sememes.size(); }

  /// Slot index of `s`, or -1 if the sememe is not in the bag.
  std::ptrdiff_t slot_of(SememeId s) const {
    auto it = std::lower_bound(sememes.begin(), sememes.end(), s,
                               [](const SememeCount& c, SememeId id) { return c.sememe < id; });
    if (it == sememes.end() || it->sememe != s) return -1;
    return it - sememes.begin();
  }

  std::size_t sememe_total() const {
    std::size_t n = 0;
    for (const auto& c : sememes) n += c.multiplicity;
    return n;
  }
};

/// Builds an utterance from already-interned ids. Sememes may repeat; repeats
/// become multiplicities.
inline Utterance make_utterance(PhonemeSeq phonemes, std::span<const SememeId> sememes,
                                std::string source_line = {}) {
  if (phonemes.empty()) throw ContractError("utterance has no phonemes");
  std::map<SememeId, std::uint32_t> counts;
  for (SememeId s : sememes) ++counts[s];
  Utterance u;
  u.phonemes = std::move(phonemes);
  u.sememes.reserve(counts.size());
  for (const auto& [s, m] : counts) u.sememes.push_back({s, m});
  u.source_line = std::move(source_line);
  return u;
}

/// Interns the tokens and builds an utterance.
inline Utterance make_utterance(Symbols& symbols, std::span<const std::string> phoneme_tokens,
                                std::span<const std::string> sememe_tokens,
                                std::string source_line = {}) {
  if (phoneme_tokens.empty()) throw ContractError("utterance has no phonemes");
  PhonemeSeq ps;
  ps.reserve(phoneme_tokens.size());
  for (const auto& t : phoneme_tokens) ps.push_back(symbols.phonemes.intern(t));
  std::vector<SememeId> ss;
  ss.reserve(sememe_tokens.size());
  for (const auto& t : sememe_tokens) ss.push_back(symbols.sememes.intern(t));
  return make_utterance(std::move(ps), ss, std::move(source_line));
}

/// Per-slot semantic target: the multiplicity of each distinct sememe.
inline std::vector<double> semantic_target(const Utterance& u) {
  std::vector<double> t;
  t.reserve(u.sememes.size());
  for (const auto& c : u.sememes) t.push_back(static_cast<double>(c.multiplicity));
  return t;
}

struct WordId {
  std::uint64_t value = 0;
  auto operator<=>(const WordId&) const = default;
};

/// A lexicon entry: a phoneme sequence paired with a sememe set, plus the
/// confidence temperature (1 = volatile hypothesis, 0 = frozen).
struct Word {
  PhonemeSeq phonemes;
  SememeSet sememes;
  double temperature = 1.0;
  std::uint64_t created_at = 0;
  std::uint64_t good_parse_count = 0;
  WordId stable_id{};

  bool same_content(const Word& other) const {
    return phonemes == other.phonemes && sememes == other.sememes;
  }
};

inline SememeSet make_sememe_set(std::vector<SememeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

inline Word make_word(PhonemeSeq phonemes, std::vector<SememeId> sememes, double temperature = 1.0) {
  Word w;
  w.phonemes = std::move(phonemes);
  w.sememes = make_sememe_set(std::move(sememes));
  w.temperature = temperature;
  return w;
}

/// Convenience for tests and tools: interns space-separated tokens.
inline Word make_word(Symbols& symbols, std::string_view phonemes, std::string_view sememes,
                      double temperature = 1.0) {
  PhonemeSeq ps;
  for (const auto& t : split_tokens(phonemes)) ps.push_back(symbols.phonemes.intern(t));
  std::vector<SememeId> ss;
  for (const auto& t : split_tokens(sememes)) ss.push_back(symbols.sememes.intern(t));
  return make_word(std::move(ps), std::move(ss), temperature);
}

inline Utterance make_utterance(Symbols& symbols, std::string_view phonemes, std::string_view sememes) {
  auto ps = split_tokens(phonemes);
  auto ss = split_tokens(sememes);
  return make_utterance(symbols, ps, ss);
}

}  // namespace lexacq

#endif  // LEXACQ_TYPES_HPP
