// Command-line driver: gen, train, eval, parse.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lexacq/lexacq.hpp"

namespace {

using namespace lexacq;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string bits(const std::vector<double>& v) {
  std::string s = "<";
  for (double x : v) s += x != 0.0 ? '1' : '0';
  return s + ">";
}

struct GenOptions {
  GenConfig cfg;
  std::string corpus, gold;
};

struct TrainOptions {
  std::string corpus, config, out, stats;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> epochs, threads;
  std::uint64_t dump_every = 0;
};

struct EvalOptions {
  std::string dict, gold, report;
};

struct ParseOptions {
  std::string dict, phonemes, sememes, config;
  std::uint64_t seed = 1;
};

LearnerConfig load_config(const std::string& path) {
  LearnerConfig cfg;
  if (!path.empty()) {
    auto in = open_in(path);
    try {
      read_config(in, cfg);
    } catch (const FormatError& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
  }
  return cfg;
}

int run_gen(const GenOptions& o) {
  Symbols sy;
  const SyntheticCorpus sc = generate_synthetic(o.cfg, sy);
  auto corpus = open_out(o.corpus);
  write_corpus(corpus, sc.utterances, sy);
  auto gold = open_out(o.gold);
  dump_gold_lexicon(gold, sc.gold, sy);
  return 0;
}

int run_train(const TrainOptions& o) {
  LearnerConfig cfg = load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();

  Symbols sy;
  auto in = open_in(o.corpus);
  std::vector<Utterance> corpus;
  try {
    corpus = read_corpus(in, sy);
  } catch (const FormatError& e) {
    throw std::runtime_error(o.corpus + ": " + e.what());
  }

  std::ofstream stats;
  if (!o.stats.empty()) stats = open_out(o.stats);
  auto observer = [&](const Dictionary& d, const TrainStats& delta) {
    for (const auto& t : delta.error_trace)
      if (stats.is_open())
        stats << t.index << '\t' << fmt(t.first_error, 6) << '\t' << fmt(t.reparse_error, 6) << '\t'
              << t.dictionary_size << '\n';
    if (o.dump_every > 0 && d.utterance_counter() % o.dump_every == 0) {
      auto snap = open_out(o.out + "." + std::to_string(d.utterance_counter()));
      dump_dictionary(snap, d, sy);
    }
  };
  const TrainResult r = train(corpus, cfg, observer);

  auto out = open_out(o.out);
  dump_dictionary(out, r.dictionary, sy);
  std::cerr << "utterances " << r.stats.utterances_processed << ", created " << r.stats.words_created << ", added "
            << r.stats.words_added << ", gc-deleted " << r.stats.words_gc_deleted << ", reduced "
            << r.stats.words_reduced << ", final size " << r.dictionary.size() << '\n';
  return 0;
}

int run_eval(const EvalOptions& o) {
  Symbols sy;
  auto din = open_in(o.dict);
  auto gin = open_in(o.gold);
  Dictionary d;
  GoldLexicon g;
  try {
    d = load_dictionary(din, sy);
  } catch (const FormatError& e) {
    throw std::runtime_error(o.dict + ": " + e.what());
  }
  try {
    g = load_gold_lexicon(gin, sy);
  } catch (const FormatError& e) {
    throw std::runtime_error(o.gold + ": " + e.what());
  }
  const EvalReport r = evaluate(d, g, sy);
  if (o.report.empty()) {
    write_report(std::cout, r);
  } else {
    auto out = open_out(o.report);
    write_report(out, r);
  }
  return 0;
}

int run_parse(const ParseOptions& o) {
  LearnerConfig cfg = load_config(o.config);
  Symbols sy;
  auto din = open_in(o.dict);
  Dictionary d;
  try {
    d = load_dictionary(din, sy);
  } catch (const FormatError& e) {
    throw std::runtime_error(o.dict + ": " + e.what());
  }
  const Utterance u = make_utterance(sy, o.phonemes, o.sememes);
  const auto matches = match_words(u, d, cfg);
  const ParseResult r = parse(u, matches, cfg, Rng(o.seed));

  std::ostream& out = std::cout;
  out << "utterance\t/" << join_phonemes(sy, u.phonemes) << "/\t{";
  for (std::size_t j = 0; j < u.sememes.size(); ++j) {
    out << (j ? " " : "") << sy.sememes.token(u.sememes[j].sememe);
    if (u.sememes[j].multiplicity > 1) out << ':' << u.sememes[j].multiplicity;
  }
  out << "}\n";
  out << "word\tposition\tPM\tSM\tPM_bar\tSM_bar\tactivation\n";
  for (std::size_t k = 0; k < matches.size(); ++k) {
    const Match& m = matches[k];
    out << '/' << join_phonemes(sy, m.word->phonemes) << "/ {" << join_sememes(sy, m.word->sememes) << "}\t" << m.offset
        << '\t' << bits(m.pm) << '\t' << bits(m.sm) << '\t' << m.pm_bar << '\t' << m.sm_bar << '\t'
        << fmt(r.activations[k], 12) << '\n';
  }
  out << "E\t" << fmt(r.error, 12) << '\n';
  out << "delta_p";
  for (double v : r.delta_p) out << '\t' << fmt(v, 12);
  out << "\ndelta_s";
  for (double v : r.delta_s) out << '\t' << fmt(v, 12);
  out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexicon acquisition from paired phoneme sequences and sememe bags"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic corpus and its gold lexicon");
  g->add_option("--words", gen.cfg.word_count, "Gold lexicon size")->capture_default_str();
  g->add_option("--alphabet", gen.cfg.alphabet_size, "Phoneme inventory size")->capture_default_str();
  g->add_option("--len-min", gen.cfg.word_len_min, "Minimum word length")->capture_default_str();
  g->add_option("--len-max", gen.cfg.word_len_max, "Maximum word length")->capture_default_str();
  g->add_option("--utterances", gen.cfg.utterance_count, "Number of utterances")->capture_default_str();
  g->add_option("--utt-min", gen.cfg.utterance_words_min, "Minimum words per utterance")->capture_default_str();
  g->add_option("--utt-max", gen.cfg.utterance_words_max, "Maximum words per utterance")->capture_default_str();
  g->add_option("--homonyms", gen.cfg.homonym_pairs, "Homonym pairs")->capture_default_str();
  g->add_option("--synonyms", gen.cfg.synonym_pairs, "Synonym pairs")->capture_default_str();
  g->add_option("--noise", gen.cfg.noise_rate, "Per-utterance semantic noise rate")->capture_default_str();
  g->add_option("--zipf", gen.cfg.zipf_exponent, "Zipf exponent of word frequency")->capture_default_str();
  g->add_option("--seed", gen.cfg.seed, "Generator seed")->capture_default_str();
  g->add_option("--corpus", gen.corpus, "Corpus output file")->required();
  g->add_option("--gold", gen.gold, "Gold lexicon output file")->required();

  TrainOptions tr;
  auto* t = app.add_subcommand("train", "Learn a dictionary from a corpus");
  t->add_option("--corpus", tr.corpus, "Corpus file")->required()->check(CLI::ExistingFile);
  t->add_option("--config", tr.config, "Learner config (key = value lines)")->check(CLI::ExistingFile);
  t->add_option("--seed", tr.seed, "Override the config seed");
  t->add_option("--epochs", tr.epochs, "Override the config epoch count");
  t->add_option("--threads", tr.threads, "Worker threads for parse restarts");
  t->add_option("--out", tr.out, "Dictionary dump output file")->required();
  t->add_option("--dump-every", tr.dump_every, "Also dump to OUT.<n> every N utterances");
  t->add_option("--stats", tr.stats, "Per-utterance stats file");

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Score a dictionary dump against a gold lexicon");
  e->add_option("--dict", ev.dict, "Dictionary dump")->required()->check(CLI::ExistingFile);
  e->add_option("--gold", ev.gold, "Gold lexicon")->required()->check(CLI::ExistingFile);
  e->add_option("--report", ev.report, "Report output file (default stdout)");

  ParseOptions pa;
  auto* p = app.add_subcommand("parse", "Match and parse one utterance against a dictionary");
  p->add_option("--dict", pa.dict, "Dictionary dump")->required()->check(CLI::ExistingFile);
  p->add_option("--phonemes", pa.phonemes, "Space-separated phoneme tokens")->required();
  p->add_option("--sememes", pa.sememes, "Space-separated sememe tokens");
  p->add_option("--config", pa.config, "Learner config")->check(CLI::ExistingFile);
  p->add_option("--seed", pa.seed, "Parse seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) return run_gen(gen);
    if (*t) return run_train(tr);
    if (*e) return run_eval(ev);
    if (*p) return run_parse(pa);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
