// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lexacq/lexacq.hpp"
#include "test_support.hpp"

using namespace lexacq;
namespace lt = lexacq::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string dump(const Dictionary& d, const Symbols& sy) {
  std::ostringstream os;
  dump_dictionary(os, d, sy);
  return os.str();
}

// The default profile's corpus, shared by several criteria.
struct DefaultRun {
  Symbols sy;
  SyntheticCorpus corpus;
  LearnerConfig cfg;
  TrainResult result;
  double seconds = 0.0;
  bool monotone = true;
  std::string monotone_detail;
};

DefaultRun& default_run() {
  static DefaultRun run = [] {
    DefaultRun r;
    r.corpus = generate_synthetic(GenConfig{}, r.sy);
    std::map<WordId, double> last;
    auto observe = [&](const Dictionary& d, const TrainStats&) {
      for (const auto& [id, w] : d.words()) {
        auto [it, fresh] = last.emplace(id, w.temperature);
        if (!fresh) {
          if (w.temperature > it->second + 1e-15 && r.monotone) {
            r.monotone = false;
            r.monotone_detail = "word " + std::to_string(id.value) + " warmed at utterance " +
                                std::to_string(d.utterance_counter());
          }
          it->second = w.temperature;
        }
      }
    };
    const auto t0 = std::chrono::steady_clock::now();
    r.result = train(r.corpus.utterances, r.cfg, observe);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }();
  return run;
}

std::set<std::pair<PhonemeSeq, SememeSet>> frozen_entries(const Dictionary& d) {
  std::set<std::pair<PhonemeSeq, SememeSet>> out;
  for (const auto& [id, w] : d.words())
    if (w.temperature < 0.1) out.emplace(w.phonemes, w.sememes);
  return out;
}

Outcome penalty_suite() {
  Outcome o;
  for (double eps : {0.0, 0.1, 0.25, 0.5}) {
    o.require(penalty_f(0.0, eps) == 0.0, "f(0) != 0");
    o.require(penalty_f(1.0, eps) == 1.0 && penalty_f(-1.0, eps) == 1.0, "f(+-1) != 1");
    o.require(std::abs(penalty_f(0.5, eps) - (0.5 + eps)) < 1e-15, "f(0.5) != 0.5 + eps");
    o.require(std::abs(penalty_f(-0.5, eps) - (0.5 + eps)) < 1e-15, "f(-0.5) != 0.5 + eps");
    for (double s : {1.0, -1.0}) {
      const double in = penalty_f(s * (1.0 - 1e-13), eps), out = penalty_f(s * (1.0 + 1e-13), eps);
      o.require(std::abs(in - 1.0) < 1e-12 && std::abs(out - 1.0) < 1e-12, "discontinuous at |delta| = 1");
    }
    for (int k = 1; k < 1000; ++k) {
      const double d = k / 1000.0;
      o.require(std::abs(penalty_f(d, eps) - lt::reference_f(d, eps)) < 1e-15, "f disagrees with its definition");
      o.require(penalty_f(d, eps) == penalty_f(-d, eps), "f not even");
      if (eps > 0) o.require(penalty_f(d, eps) > d, fmt("f(%g) <= |delta|", d));
    }
    for (double d : {1.5, 2.0, -3.0}) o.require(penalty_f(d, eps) == d * d, "f != delta^2 outside [-1,1]");
  }
  return o;
}

Outcome gradient_check() {
  Outcome o;
  const LearnerConfig cfg;
  Rng rng(20);
  int checked = 0;
  double worst = 0.0;
  while (checked < 150) {
    lt::Instance ins = lt::random_instance(rng, 5, 10);
    const auto alpha = lt::random_interior_alpha(rng, ins.matches.size());
    if (!lt::avoids_kinks(lt::reference_error(ins.utterance, ins.matches, alpha, cfg), ins.matches, 1e-3)) continue;
    const auto g = parse_gradient(ins.utterance, ins.matches, alpha, cfg);
    const auto n = lt::numeric_gradient(ins.utterance, ins.matches, alpha, cfg);
    for (std::size_t w = 0; w < g.size(); ++w) {
      const double rel = std::abs(g[w] - n[w]) / std::max(1.0, std::abs(n[w]));
      worst = std::max(worst, rel);
    }
    ++checked;
  }
  o.require(worst < 1e-4, fmt("max relative error %.3g", worst));
  if (o.ok) o.detail = std::to_string(checked) + " instances, max relative error " + fmt("%.2g", worst);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const LearnerConfig cfg;
  Rng rng(30);
  int bad = 0;
  double worst = -1e9;
  for (int t = 0; t < 300; ++t) {
    lt::Instance ins = lt::random_instance(rng, 1, 12);
    const double got = parse(ins.utterance, ins.matches, cfg, rng.derive(StreamTag::kFirstParse, {std::uint64_t(t)})).error;
    const double best = brute_force_parse(ins.utterance, ins.matches, cfg).error;
    const double ref = lt::reference_binary_optimum(ins.utterance, ins.matches, cfg).error;
    o.require(std::abs(best - ref) < 1e-9, "brute force disagrees with the reference optimum");
    worst = std::max(worst, got - best);
    if (got > best + 0.05) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + "/300 instances above the binary optimum + 0.05");
  int covered = 0;
  for (int t = 0; t < 200; ++t) {
    lt::Instance ins = lt::covered_instance(rng, 12);
    const auto opt = lt::reference_binary_optimum(ins.utterance, ins.matches, cfg);
    if (opt.error > 1e-12 || opt.masks.size() != 1) continue;
    ++covered;
    const ParseResult r = parse(ins.utterance, ins.matches, cfg, rng.derive(StreamTag::kReparse, {std::uint64_t(t)}));
    o.require(r.error < 0.01, fmt("covered instance E = %g", r.error));
    for (std::size_t w = 0; w < r.activations.size(); ++w) {
      const double want = (opt.masks[0] >> w) & 1 ? 1.0 : 0.0;
      o.require(std::abs(r.activations[w] - want) <= 0.01, "covered instance activation not within 0.01 of the cover");
    }
  }
  o.require(covered >= 100, "too few unique-cover instances");
  if (o.ok)
    o.detail = "300 random (worst E - optimum " + fmt("%.3g", worst) + "), " + std::to_string(covered) + " unique covers";
  return o;
}

Outcome the_man_rows() {
  Outcome o;
  Symbols sy;
  const Utterance u = make_utterance(sy, "ð ə m ɛ n", "THE MAN");
  const Word the = make_word(sy, "ð ə", "THE"), them = make_word(sy, "ð ɛ m", "THEM"), man = make_word(sy, "m a n", "MAN");
  struct Row {
    const Word* w;
    std::size_t offset;
    std::vector<double> pm, sm;
    std::size_t pm_bar, sm_bar;
    bool kept;
  };
  const std::vector<Row> rows = {{&the, 0, {1, 1, 0, 0, 0}, {1, 0}, 0, 0, true},
                                 {&the, 1, {0, 0, 0, 0, 0}, {1, 0}, 2, 0, false},
                                 {&them, 0, {1, 0, 1, 0, 0}, {0, 0}, 1, 1, true},
                                 {&man, 2, {0, 0, 1, 0, 1}, {0, 1}, 1, 0, true}};
  const LearnerConfig cfg;
  for (const Row& r : rows) {
    const Match m = match_word_at(*r.w, u, r.offset);
    const std::string at = join_phonemes(sy, r.w->phonemes) + "@" + std::to_string(r.offset);
    o.require(m.pm == r.pm && m.sm == r.sm && m.pm_bar == r.pm_bar && m.sm_bar == r.sm_bar, at + " row differs");
    o.require(passes_match_filter(m, cfg) == r.kept, at + " filter decision differs");
  }
  Dictionary d;
  (void)d.upsert(the);
  (void)d.upsert(them);
  (void)d.upsert(man);
  const auto ms = match_words(u, d, cfg);
  o.require(ms.size() == 3, "match_words returned " + std::to_string(ms.size()) + " matches");
  for (const Match& m : ms)
    o.require(!(m.word->phonemes == the.phonemes && m.offset == 1), "/ðə/@1 survived the filter");
  return o;
}

Outcome kick_off_trace() {
  Outcome o;
  Symbols sy;
  Dictionary d;
  LearnerConfig cfg;
  cfg.force_fix_trials = true;
  (void)d.upsert(make_word(sy, "y u", "YOU", 0.0));
  (void)d.upsert(make_word(sy, "ð ə", "THE", 0.0));
  const WordId rsak = *d.upsert(make_word(sy, "r s a k", "SOCK", 0.64)).id;
  const Utterance u = make_utterance(sy, "y u k ɪ k t ɔ f ð ə s a k", "YOU KICK OFF THE SOCK");
  UtteranceTrace trace;
  const TrainStats s = process_utterance(u, d, cfg, Rng(cfg.seed), &trace);
  const Word sak = make_word(sy, "s a k", "SOCK"), kick = make_word(sy, "k ɪ k t ɔ f", "KICK OFF");
  o.require(s.words_added == 2 && d.size() == 5, "added " + std::to_string(s.words_added) + " words");
  o.require(d.find_content(sak.phonemes, sak.sememes).has_value(), "/sak/{SOCK} missing");
  o.require(d.find_content(kick.phonemes, kick.sememes).has_value(), "/kɪktɔf/{KICK OFF} missing");
  o.require(d.find(rsak) && d.find(rsak)->temperature == 0.64, "/rsak/ temperature changed");
  o.require(!trace.cooled.count(rsak), "/rsak/ cooled");
  bool seen = false;
  for (std::size_t k = 0; k < trace.first_matches.size(); ++k) {
    if (trace.first_matches[k].word->stable_id != rsak) continue;
    seen = true;
    o.require(trace.reparse.activations[k] < 0.5, fmt("/rsak/ reparse activation %g", trace.reparse.activations[k]));
  }
  o.require(seen, "/rsak/ did not match");
  return o;
}

Outcome synthetic_recovery() {
  Outcome o;
  DefaultRun& r = default_run();
  const EvalReport e = evaluate(r.result.dictionary, r.corpus.gold, r.sy);
  o.require(e.recall_gold >= 0.9, fmt("recall %.3f", e.recall_gold));
  o.require(e.precision_used >= 0.9, fmt("precision %.3f", e.precision_used));
  o.require(r.seconds < 300, fmt("took %.0f s", r.seconds));
  if (o.ok) o.detail = fmt("recall %.3f, precision %.3f, %.1f s", e.recall_gold, e.precision_used, r.seconds);
  return o;
}

Outcome homonyms_synonyms() {
  Outcome o;
  Symbols sy;
  GenConfig g;
  g.homonym_pairs = 2;
  g.synonym_pairs = 2;
  const SyntheticCorpus c = generate_synthetic(g, sy);
  const TrainResult t = train(c.utterances, LearnerConfig{});
  int frozen = 0, total = 0;
  for (const auto* pairs : {&c.homonyms, &c.synonyms}) {
    for (const auto& [a, b] : *pairs) {
      for (std::size_t i : {a, b}) {
        ++total;
        const GoldEntry& e = c.gold.entries[i];
        auto id = t.dictionary.find_content(e.phonemes, e.sememes);
        if (id && t.dictionary.find(*id)->temperature < 0.1) {
          ++frozen;
        } else {
          o.require(false, join_phonemes(sy, e.phonemes) + " {" + join_sememes(sy, e.sememes) + "} not frozen");
        }
      }
    }
  }
  o.require(total == 8, "generator produced " + std::to_string(total) + " pair entries");
  if (o.ok) o.detail = std::to_string(frozen) + "/" + std::to_string(total) + " pair entries frozen";
  return o;
}

Outcome noise_robustness() {
  Outcome o;
  Symbols sy;
  GenConfig g;
  g.noise_rate = 0.05;
  const SyntheticCorpus c = generate_synthetic(g, sy);
  const TrainResult t = train(c.utterances, LearnerConfig{});
  const EvalReport e = evaluate(t.dictionary, c.gold, sy);
  o.require(e.precision_used >= 0.8, fmt("precision %.3f", e.precision_used));
  if (o.ok) o.detail = fmt("precision %.3f, recall %.3f", e.precision_used, e.recall_gold);
  return o;
}

Outcome lifecycle_invariants() {
  Outcome o;
  DefaultRun& r = default_run();
  o.require(r.monotone, r.monotone_detail);

  LearnerConfig cfg;
  {
    Symbols sy;
    Dictionary d;
    std::vector<WordId> frozen;
    for (int k = 0; k < 25; ++k) frozen.push_back(*d.upsert(make_word(sy, "f " + std::to_string(k), "F", 0.0)).id);
    d.set_utterance_counter(cfg.trial_period + 1);
    Rng rng(91);
    for (int sweep = 0; sweep < 10000; ++sweep) {
      if (sweep % 50 == 0) (void)d.upsert(make_word(sy, "w " + std::to_string(sweep), "W", rng.uniform(0.1, 1.0)));
      (void)garbage_collect(d, cfg, rng);
    }
    for (WordId id : frozen) o.require(d.find(id) != nullptr, "frozen word collected");
  }
  {
    Dictionary d = r.result.dictionary;
    (void)reduce_dictionary(d, cfg, Rng(5));
    const std::string once = dump(d, r.sy);
    o.require(reduce_dictionary(d, cfg, Rng(6)) == 0 && dump(d, r.sy) == once, "second reduction changed the dictionary");
  }
  {
    Symbols sy;
    Dictionary d;
    const WordId composite = *d.upsert(make_word(sy, "a t s r a ɪ t", "THAT BE RIGHT", 0.0)).id;
    (void)d.upsert(make_word(sy, "a t", "THAT", 0.0));
    (void)d.upsert(make_word(sy, "s", "BE", 0.0));
    (void)d.upsert(make_word(sy, "r a ɪ t", "RIGHT", 0.0));
    o.require(reduce_dictionary(d, cfg, Rng(1)) == 1 && !d.find(composite) && d.size() == 3, "/atsraɪt/ kept");
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  DefaultRun& r = default_run();
  const std::string first = dump(r.result.dictionary, r.sy);
  Symbols sy;
  const SyntheticCorpus c = generate_synthetic(GenConfig{}, sy);
  const std::string again = dump(train(c.utterances, LearnerConfig{}).dictionary, sy);
  LearnerConfig threaded;
  threaded.threads = 4;
  const std::string four = dump(train(c.utterances, threaded).dictionary, sy);
  o.require(first == again, "repeated run differs");
  o.require(first == four, "threads=4 differs");
  return o;
}

Outcome cross_seed_stability() {
  Outcome o;
  DefaultRun& r = default_run();
  LearnerConfig other = r.cfg;
  other.seed = r.cfg.seed + 1;
  const auto a = frozen_entries(r.result.dictionary);
  const auto b = frozen_entries(train(r.corpus.utterances, other).dictionary);
  std::size_t both = 0;
  for (const auto& e : a) both += b.count(e);
  const std::size_t either = a.size() + b.size() - both;
  const double jaccard = either ? static_cast<double>(both) / static_cast<double>(either) : 0.0;
  o.require(jaccard >= 0.85, fmt("agreement %.3f", jaccard));
  o.detail = fmt("agreement %.3f (%g shared of %g)", jaccard, static_cast<double>(both), static_cast<double>(either));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"penalty function suite", penalty_suite},
      {"gradient check", gradient_check},
      {"oracle equivalence", oracle_equivalence},
      {"match rows for the men", the_man_rows},
      {"kick-off integration trace", kick_off_trace},
      {"synthetic recovery", synthetic_recovery},
      {"homonymy and synonymy", homonyms_synonyms},
      {"noise robustness", noise_robustness},
      {"lifecycle invariants", lifecycle_invariants},
      {"determinism", determinism},
      {"cross-seed stability", cross_seed_stability},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::printf("%s %2zu %s%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
