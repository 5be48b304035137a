#ifndef LEXACQ_MATCHER_HPP
#define LEXACQ_MATCHER_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "config.hpp"
#include "dictionary.hpp"
#include "types.hpp"

namespace lexacq {

/// A word placed at an offset in an utterance, with its coverage of the
/// utterance's phoneme positions (pm) and sememe slots (sm), and counts of
/// the word's phonemes and sememes the utterance does not account for.
///
/// `word` is non-owning; it must outlive the match.
struct Match {
  const Word* word = nullptr;
  std::size_t offset = 0;
  std::vector<double> pm;
  std::vector<double> sm;
  std::size_t pm_bar = 0;
  std::size_t sm_bar = 0;

  std::size_t left() const noexcept { return offset; }
  /// Exclusive; may exceed the utterance length when the word overhangs.
  std::size_t right() const noexcept { return offset + word->phonemes.size(); }

  std::size_t matched_phonemes() const noexcept { return word->phonemes.size() - pm_bar; }
};

inline Match match_word_at(const Word& w, const Utterance& u, std::size_t offset) {
  if (offset >= u.phonemes.size()) throw ContractError("match offset outside utterance");
  Match m;
  m.word = &w;
  m.offset = offset;
  m.pm.assign(u.phonemes.size(), 0.0);
  m.sm.assign(u.sememes.size(), 0.0);
  for (std::size_t k = 0; k < w.phonemes.size(); ++k) {
    const std::size_t p = offset + k;
    if (p < u.phonemes.size() && u.phonemes[p] == w.phonemes[k]) {
      m.pm[p] = 1.0;
    } else {
      ++m.pm_bar;
    }
  }
  for (SememeId s : w.sememes) {
    auto slot = u.slot_of(s);
    if (slot < 0) {
      ++m.sm_bar;
    } else {
      m.sm[static_cast<std::size_t>(slot)] = 1.0;
    }
  }
  return m;
}

inline bool passes_match_filter(const Match& m, const LearnerConfig& cfg) {
  const auto len = static_cast<double>(m.word->phonemes.size());
  return m.pm_bar <= cfg.match_max_mismatch &&
         static_cast<double>(m.matched_phonemes()) >= cfg.match_min_coverage * len;
}

namespace detail {

inline void sort_matches(std::vector<Match>& ms) {
  std::sort(ms.begin(), ms.end(), [](const Match& a, const Match& b) {
    if (a.offset != b.offset) return a.offset < b.offset;
    return a.word->stable_id < b.word->stable_id;
  });
}

}  // namespace detail

/// Scores every (word, offset) pair and keeps those passing the filter,
/// ordered by (offset, stable_id). Words need distinct stable ids.
inline std::vector<Match> match_words(const Utterance& u, std::span<const Word* const> words,
                                      const LearnerConfig& cfg) {
  std::vector<Match> out;
  for (const Word* w : words) {
    for (std::size_t off = 0; off < u.phonemes.size(); ++off) {
      Match m = match_word_at(*w, u, off);
      if (passes_match_filter(m, cfg)) out.push_back(std::move(m));
    }
  }
  detail::sort_matches(out);
  return out;
}

inline std::vector<Match> match_words(const Utterance& u, std::span<const Word> words, const LearnerConfig& cfg) {
  std::vector<const Word*> ptrs;
  ptrs.reserve(words.size());
  for (const Word& w : words) ptrs.push_back(&w);
  return match_words(u, std::span<const Word* const>(ptrs), cfg);
}

/// Dictionary overload. When the filter demands positive coverage, a word
/// can only be retained at offsets where it shares at least one phoneme with
/// the utterance, so candidates come from the phoneme index.
inline std::vector<Match> match_words(const Utterance& u, const Dictionary& d, const LearnerConfig& cfg,
                                      std::optional<WordId> exclude = std::nullopt) {
  std::vector<Match> out;
  if (cfg.match_min_coverage <= 0.0) {
    std::vector<const Word*> all;
    for (const auto& [id, w] : d.words())
      if (!exclude || id != *exclude) all.push_back(&w);
    return match_words(u, std::span<const Word* const>(all), cfg);
  }
  std::set<std::pair<WordId, std::size_t>> tried;
  for (std::size_t p = 0; p < u.phonemes.size(); ++p) {
    for (WordId id : d.words_with(u.phonemes[p])) {
      if (exclude && id == *exclude) continue;
      const Word& w = *d.find(id);
      for (std::size_t k = 0; k < w.phonemes.size() && k <= p; ++k) {
        if (w.phonemes[k] != u.phonemes[p]) continue;
        const std::size_t off = p - k;
        if (!tried.emplace(id, off).second) continue;
        Match m = match_word_at(w, u, off);
        if (passes_match_filter(m, cfg)) out.push_back(std::move(m));
      }
    }
  }
  detail::sort_matches(out);
  return out;
}

}  // namespace lexacq

#endif  // LEXACQ_MATCHER_HPP
