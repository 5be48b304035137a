#ifndef LEXACQ_LIFECYCLE_HPP
#define LEXACQ_LIFECYCLE_HPP

#include <algorithm>
#include <cmath>
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

/// Multiplier applied to a cooled word's temperature: 1 - kappa*exp(-E/E0).
/// Lower error, stronger cooling; tends to 1 as E grows.
inline double cooling_factor(double error, const LearnerConfig& cfg) {
  if (error < 0.0) throw ContractError("parse error must be >= 0");
  return 1.0 - cfg.cooling_kappa * std::exp(-error / cfg.cooling_e0);
}

/// Error per target slot, the measure behind "good parse".
inline double normalized_error(const Utterance& u, double error) {
  return error / static_cast<double>(u.phonemes.size() + u.sememes.size());
}

/// Whether match k qualifies for cooling: clean phonemes and sememes, well
/// parsed neighbors (positions off the utterance count as well parsed), and
/// activation over threshold.
inline bool qualifies_for_cooling(const Match& m, std::size_t k, const ParseResult& parse, const LearnerConfig& cfg) {
  if (m.pm_bar != 0 || m.sm_bar != 0) return false;
  if (!(parse.activations[k] > cfg.activation_threshold)) return false;
  const auto& dp = parse.delta_p;
  if (m.left() > 0 && !(std::abs(dp[m.left() - 1]) < cfg.neighbor_threshold)) return false;
  if (m.right() < dp.size() && !(std::abs(dp[m.right()]) < cfg.neighbor_threshold)) return false;
  return true;
}

/// Cools every word with a qualifying match, once per call even if it
/// qualifies at several offsets. Words are looked up by stable id in `d`
/// first, then in `candidates`. Returns the ids cooled.
inline std::set<WordId> cool_words(const Utterance& u, std::span<const Match> matches, const ParseResult& parse,
                                   Dictionary& d, std::span<Word> candidates, const LearnerConfig& cfg) {
  std::set<WordId> cooled;
  const double factor = cooling_factor(parse.error, cfg);
  const bool good = normalized_error(u, parse.error) < cfg.good_parse_norm_threshold;
  for (std::size_t k = 0; k < matches.size(); ++k) {
    const WordId id = matches[k].word->stable_id;
    if (cooled.count(id) || !qualifies_for_cooling(matches[k], k, parse, cfg)) continue;
    Word* w = d.find(id);
    if (!w) {
      auto it = std::find_if(candidates.begin(), candidates.end(), [&](const Word& c) { return c.stable_id == id; });
      if (it == candidates.end()) continue;
      w = &*it;
    }
    w->temperature *= factor;
    if (good) ++w->good_parse_count;
    cooled.insert(id);
  }
  return cooled;
}

inline std::set<WordId> cool_words(const Utterance& u, std::span<const Match> matches, const ParseResult& parse,
                                   Dictionary& d, const LearnerConfig& cfg) {
  return cool_words(u, matches, parse, d, std::span<Word>{}, cfg);
}

/// Admits the candidate words behind `new_matches` that were cooled.
/// Returns how many were actually inserted.
inline std::size_t add_cooled_words(std::span<const Match> new_matches, const std::set<WordId>& cooled, Dictionary& d) {
  std::size_t added = 0;
  std::set<WordId> done;
  for (const Match& m : new_matches) {
    const WordId id = m.word->stable_id;
    if (!cooled.count(id) || !done.insert(id).second) continue;
    if (d.upsert(*m.word).status == UpsertStatus::kInserted) ++added;
  }
  return added;
}

/// Ungated sweep: every word past its trial period is deleted with
/// probability equal to its temperature. One draw per eligible word, in id
/// order. Returns the number deleted.
inline std::size_t garbage_collect(Dictionary& d, const LearnerConfig& cfg, Rng& rng) {
  std::vector<WordId> doomed;
  const std::uint64_t now = d.utterance_counter();
  for (const auto& [id, w] : d.words()) {
    if (now - w.created_at <= cfg.trial_period) continue;
    if (rng.bernoulli(w.temperature)) doomed.push_back(id);
  }
  for (WordId id : doomed) d.erase(id);
  return doomed.size();
}

/// Utterance with the word's phonemes and each of its sememes once.
inline Utterance word_as_utterance(const Word& w) {
  return make_utterance(w.phonemes, std::span<const SememeId>(w.sememes.data(), w.sememes.size()));
}

/// Ungated pass: each stable word (temperature below reduce_max_temperature),
/// longest first, is parsed from the rest of the dictionary and deleted when
/// that parse's error is under reduce_error_threshold. Deletions take effect
/// immediately, so later probes see the reduced dictionary. The random
/// stream of each probe depends only on `stream` and the word's id.
inline std::size_t reduce_dictionary(Dictionary& d, const LearnerConfig& cfg, const Rng& stream) {
  std::vector<const Word*> order;
  for (const auto& [id, w] : d.words())
    if (w.temperature < cfg.reduce_max_temperature) order.push_back(&w);
  std::stable_sort(order.begin(), order.end(),
                   [](const Word* a, const Word* b) { return a->phonemes.size() > b->phonemes.size(); });
  std::vector<WordId> ids;
  ids.reserve(order.size());
  for (const Word* w : order) ids.push_back(w->stable_id);

  std::size_t deleted = 0;
  for (WordId id : ids) {
    const Word* w = d.find(id);
    const Utterance probe = word_as_utterance(*w);
    const auto matches = match_words(probe, d, cfg, id);
    if (matches.empty()) continue;
    const ParseResult r = parse(probe, matches, cfg, stream.derive(StreamTag::kReduce, {id.value}));
    if (r.error < cfg.reduce_error_threshold) {
      d.erase(id);
      ++deleted;
    }
  }
  return deleted;
}

}  // namespace lexacq

#endif  // LEXACQ_LIFECYCLE_HPP
