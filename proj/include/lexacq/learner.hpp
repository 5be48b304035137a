#ifndef LEXACQ_LEARNER_HPP
#define LEXACQ_LEARNER_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "config.hpp"
#include "dictionary.hpp"
#include "hypothesizer.hpp"
#include "lifecycle.hpp"
#include "matcher.hpp"
#include "parser.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace lexacq {

struct TraceEntry {
  std::uint64_t index = 0;
  double first_error = 0.0;
  double reparse_error = 0.0;
  std::size_t dictionary_size = 0;
};

struct TrainStats {
  std::uint64_t utterances_processed = 0;
  std::uint64_t words_created = 0;
  std::uint64_t words_added = 0;
  std::uint64_t words_gc_deleted = 0;
  std::uint64_t words_reduced = 0;
  std::vector<TraceEntry> error_trace;

  TrainStats& operator+=(const TrainStats& o) {
    utterances_processed += o.utterances_processed;
    words_created += o.words_created;
    words_added += o.words_added;
    words_gc_deleted += o.words_gc_deleted;
    words_reduced += o.words_reduced;
    error_trace.insert(error_trace.end(), o.error_trace.begin(), o.error_trace.end());
    return *this;
  }
};

/// Everything one utterance's processing produced, for tracing and tests.
struct UtteranceTrace {
  std::vector<Match> first_matches;
  ParseResult first_parse;
  std::vector<Word> candidates;
  std::vector<Match> new_matches;
  ParseResult reparse;
  std::set<WordId> cooled;
};

/// One online step: match, parse, hypothesize, rematch the hypotheses,
/// reparse with everything, cool, admit cooled hypotheses, then the
/// period-gated garbage collection and reduction. `root` is the training
/// stream; this utterance's randomness is derived from it and the
/// dictionary's utterance counter.
inline TrainStats process_utterance(const Utterance& u, Dictionary& d, const LearnerConfig& cfg, const Rng& root,
                                    UtteranceTrace* trace = nullptr) {
  TrainStats delta;
  const std::uint64_t counter = d.advance_counter();
  const Rng stream = root.derive(StreamTag::kUtterance, {counter});

  std::vector<Match> matches = match_words(u, d, cfg);
  ParseResult first = parse(u, matches, cfg, stream.derive(StreamTag::kFirstParse));

  Rng fix_rng = stream.derive(StreamTag::kFixTrials);
  std::vector<Word> candidates = create_new_words(u, matches, first, d, cfg, fix_rng);
  for (Word& c : candidates) c.stable_id = d.allocate_id();
  delta.words_created = candidates.size();

  std::vector<Match> new_matches = match_words(u, std::span<const Word>(candidates), cfg);
  std::vector<Match> combined = matches;
  combined.insert(combined.end(), new_matches.begin(), new_matches.end());
  ParseResult second = parse(u, combined, cfg, stream.derive(StreamTag::kReparse));

  std::set<WordId> cooled = cool_words(u, combined, second, d, candidates, cfg);
  delta.words_added = add_cooled_words(new_matches, cooled, d);

  if (counter % cfg.gc_period == 0) {
    Rng gc_rng = stream.derive(StreamTag::kGarbageCollect);
    delta.words_gc_deleted = garbage_collect(d, cfg, gc_rng);
  }
  if (counter % cfg.reduce_period == 0) delta.words_reduced = reduce_dictionary(d, cfg, stream.derive(StreamTag::kReduce));

  delta.utterances_processed = 1;
  delta.error_trace.push_back({counter, first.error, second.error, d.size()});

  if (trace) {
    trace->first_matches = std::move(matches);
    trace->first_parse = std::move(first);
    trace->candidates = std::move(candidates);
    trace->new_matches = std::move(new_matches);
    trace->reparse = std::move(second);
    trace->cooled = std::move(cooled);
  }
  return delta;
}

struct TrainResult {
  Dictionary dictionary;
  TrainStats stats;
};

/// Called after each utterance with the dictionary and its counter.
using TrainObserver = std::function<void(const Dictionary&, const TrainStats& delta)>;

/// Runs the corpus through process_utterance for cfg.epochs passes, then a
/// final ungated garbage collection and reduction.
inline TrainResult train(std::span<const Utterance> corpus, const LearnerConfig& cfg,
                         const TrainObserver& observer = {}) {
  cfg.validate();
  TrainResult out;
  const Rng root(cfg.seed);
  if (corpus.empty()) return out;
  for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const Utterance& u : corpus) {
      TrainStats delta = process_utterance(u, out.dictionary, cfg, root);
      if (observer) observer(out.dictionary, delta);
      out.stats += delta;
    }
  }
  const Rng final_stream = root.derive(StreamTag::kUtterance, {out.dictionary.utterance_counter(), UINT64_MAX});
  Rng gc_rng = final_stream.derive(StreamTag::kGarbageCollect);
  out.stats.words_gc_deleted += garbage_collect(out.dictionary, cfg, gc_rng);
  out.stats.words_reduced += reduce_dictionary(out.dictionary, cfg, final_stream.derive(StreamTag::kReduce));
  return out;
}

}  // namespace lexacq

#endif  // LEXACQ_LEARNER_HPP
