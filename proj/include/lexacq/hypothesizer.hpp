#ifndef LEXACQ_HYPOTHESIZER_HPP
#define LEXACQ_HYPOTHESIZER_HPP

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "config.hpp"
#include "dictionary.hpp"
#include "matcher.hpp"
#include "parser.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace lexacq {

/// Half-open span [start, end) of consecutive underparsed phoneme positions.
struct UnderparsedRun {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start; }
  auto operator<=>(const UnderparsedRun&) const = default;
};

/// Maximal runs of positions with delta_p > threshold, in order.
inline std::vector<UnderparsedRun> find_underparsed_runs(std::span<const double> delta_p, double threshold) {
  std::vector<UnderparsedRun> runs;
  std::size_t i = 0;
  while (i < delta_p.size()) {
    if (delta_p[i] > threshold) {
      std::size_t j = i;
      while (j < delta_p.size() && delta_p[j] > threshold) ++j;
      runs.push_back({i, j});
      i = j;
    } else {
      ++i;
    }
  }
  return runs;
}

/// Sememes of the utterance whose slots are underparsed.
inline std::vector<SememeId> underparsed_sememes(const Utterance& u, std::span<const double> delta_s, double threshold) {
  std::vector<SememeId> out;
  for (std::size_t j = 0; j < u.sememes.size(); ++j)
    if (delta_s[j] > threshold) out.push_back(u.sememes[j].sememe);
  return out;
}

namespace detail {

inline Word fresh_candidate(PhonemeSeq phonemes, std::vector<SememeId> sememes, const LearnerConfig& cfg,
                            std::uint64_t now) {
  Word w = make_word(std::move(phonemes), std::move(sememes), cfg.initial_temperature);
  w.created_at = now;
  return w;
}

inline bool fires(Rng& rng, double p, const LearnerConfig& cfg) {
  const bool drawn = rng.bernoulli(p);
  return cfg.force_fix_trials ? p > 0.0 : drawn;
}

}  // namespace detail

/// Fixed copies of words that took part in the parse. Per match, in match
/// order: a semantic trial with probability activation * temperature, then a
/// phonemic trial with probability activation. Both trials always draw.
///
/// Semantic fixes: drop sememes the utterance lacks or that are overparsed;
/// add the underparsed sememes when no phoneme run is underparsed.
/// Phonemic fixes: drop mismatched and overparsed phonemes; absorb a whole
/// neighboring underparsed run on either side when it is no longer than
/// max_extension_len.
///
/// Candidates may be semanticless or duplicates; create_new_words filters.
inline std::vector<Word> fix_words(const Utterance& u, std::span<const Match> matches, const ParseResult& parse,
                                   const LearnerConfig& cfg, Rng& rng, std::uint64_t now = 0) {
  std::vector<Word> out;
  const double c = cfg.delta_threshold;
  const auto runs = find_underparsed_runs(parse.delta_p, c);
  const auto missing = underparsed_sememes(u, parse.delta_s, c);
  const std::size_t len = u.phonemes.size();

  for (std::size_t k = 0; k < matches.size(); ++k) {
    const Match& m = matches[k];
    const Word& w = *m.word;
    const double alpha = parse.activations[k];

    if (detail::fires(rng, alpha * w.temperature, cfg)) {
      std::vector<SememeId> kept;
      bool removed = false;
      for (SememeId s : w.sememes) {
        const auto slot = u.slot_of(s);
        if (slot < 0 || parse.delta_s[static_cast<std::size_t>(slot)] < -c) {
          removed = true;
        } else {
          kept.push_back(s);
        }
      }
      if (removed) out.push_back(detail::fresh_candidate(w.phonemes, kept, cfg, now));

      if (runs.empty()) {
        std::vector<SememeId> grown(w.sememes.begin(), w.sememes.end());
        bool added = false;
        for (SememeId s : missing)
          if (!std::binary_search(w.sememes.begin(), w.sememes.end(), s)) grown.push_back(s), added = true;
        if (added) out.push_back(detail::fresh_candidate(w.phonemes, std::move(grown), cfg, now));
      }
    }

    if (detail::fires(rng, alpha, cfg)) {
      PhonemeSeq kept;
      bool removed = false;
      for (std::size_t i = 0; i < w.phonemes.size(); ++i) {
        const std::size_t p = m.offset + i;
        const bool matched = p < len && m.pm[p] != 0.0;
        if (!matched || parse.delta_p[p] < -c) {
          removed = true;
        } else {
          kept.push_back(w.phonemes[i]);
        }
      }
      if (removed && !kept.empty()) out.push_back(detail::fresh_candidate(std::move(kept), w.sememes, cfg, now));

      for (const UnderparsedRun& run : runs) {
        if (run.length() > cfg.max_extension_len) continue;
        if (run.end == m.left()) {
          PhonemeSeq ext(u.phonemes.begin() + static_cast<std::ptrdiff_t>(run.start),
                         u.phonemes.begin() + static_cast<std::ptrdiff_t>(run.end));
          ext.insert(ext.end(), w.phonemes.begin(), w.phonemes.end());
          out.push_back(detail::fresh_candidate(std::move(ext), w.sememes, cfg, now));
        } else if (run.start == m.right()) {
          PhonemeSeq ext = w.phonemes;
          ext.insert(ext.end(), u.phonemes.begin() + static_cast<std::ptrdiff_t>(run.start),
                     u.phonemes.begin() + static_cast<std::ptrdiff_t>(run.end));
          out.push_back(detail::fresh_candidate(std::move(ext), w.sememes, cfg, now));
        }
      }
    }
  }
  return out;
}

/// Wholly new words for the unparsed residue: when one or two underparsed
/// runs remain and each fits in max_new_word_len, each run becomes a word
/// carrying the full underparsed sememe set. Nothing is proposed without
/// underparsed sememes.
inline std::vector<Word> propose_new_words(const Utterance& u, const ParseResult& parse, const LearnerConfig& cfg,
                                           std::uint64_t now = 0) {
  const double c = cfg.delta_threshold;
  const auto runs = find_underparsed_runs(parse.delta_p, c);
  const auto missing = underparsed_sememes(u, parse.delta_s, c);
  std::vector<Word> out;
  if (runs.empty() || runs.size() > 2 || missing.empty()) return out;
  for (const auto& r : runs)
    if (r.length() > cfg.max_new_word_len) return out;
  for (const auto& r : runs) {
    PhonemeSeq ps(u.phonemes.begin() + static_cast<std::ptrdiff_t>(r.start),
                  u.phonemes.begin() + static_cast<std::ptrdiff_t>(r.end));
    out.push_back(detail::fresh_candidate(std::move(ps), missing, cfg, now));
  }
  return out;
}

/// Fixes followed by new words, without semanticless or empty candidates and
/// without content already in `d` or earlier in the list.
inline std::vector<Word> create_new_words(const Utterance& u, std::span<const Match> matches,
                                          const ParseResult& parse, const Dictionary& d, const LearnerConfig& cfg,
                                          Rng& rng) {
  const std::uint64_t now = d.utterance_counter();
  std::vector<Word> all = fix_words(u, matches, parse, cfg, rng, now);
  for (Word& w : propose_new_words(u, parse, cfg, now)) all.push_back(std::move(w));

  std::vector<Word> out;
  std::set<std::pair<PhonemeSeq, SememeSet>> seen;
  for (Word& w : all) {
    if (w.phonemes.empty() || w.sememes.empty()) continue;
    if (d.find_content(w.phonemes, w.sememes)) continue;
    if (!seen.emplace(w.phonemes, w.sememes).second) continue;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace lexacq

#endif  // LEXACQ_HYPOTHESIZER_HPP
