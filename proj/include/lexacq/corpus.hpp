#ifndef LEXACQ_CORPUS_HPP
#define LEXACQ_CORPUS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dictionary.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "symbols.hpp"
#include "types.hpp"

namespace lexacq {

// ---------------------------------------------------------------------------
// Corpus files: one utterance per line, `phonemes<TAB>sememes`, tokens
// separated by spaces. `#` lines and blank lines are skipped.

/// Parses one corpus line. `lineno` is only used in error messages.
inline Utterance parse_corpus_line(std::string_view line, Symbols& sy, std::size_t lineno = 0) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) throw FormatError("missing tab between phonemes and sememes", lineno);
  if (line.find('\t', tab + 1) != std::string_view::npos) throw FormatError("more than one tab", lineno);
  auto ps = split_tokens(line.substr(0, tab));
  auto ss = split_tokens(line.substr(tab + 1));
  if (ps.empty()) throw FormatError("empty phoneme field", lineno);
  return make_utterance(sy, ps, ss, std::string(line));
}

inline std::vector<Utterance> read_corpus(std::istream& in, Symbols& sy) {
  std::vector<Utterance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line.front() == '#') continue;
    out.push_back(parse_corpus_line(line, sy, lineno));
  }
  return out;
}

/// Sememes are written one token per occurrence, lexicographically sorted.
inline void write_corpus_line(std::ostream& out, const Utterance& u, const Symbols& sy) {
  out << join_phonemes(sy, u.phonemes) << '\t';
  std::vector<std::string> toks;
  for (const auto& c : u.sememes)
    for (std::uint32_t i = 0; i < c.multiplicity; ++i) toks.push_back(sy.sememes.token(c.sememe));
  std::sort(toks.begin(), toks.end());
  for (std::size_t i = 0; i < toks.size(); ++i) out << (i ? " " : "") << toks[i];
  out << '\n';
}

inline void write_corpus(std::ostream& out, std::span<const Utterance> corpus, const Symbols& sy) {
  for (const auto& u : corpus) write_corpus_line(out, u, sy);
}

// ---------------------------------------------------------------------------
// Gold lexicon.

struct GoldEntry {
  PhonemeSeq phonemes;
  SememeSet sememes;

  auto operator<=>(const GoldEntry&) const = default;
};

struct GoldLexicon {
  std::vector<GoldEntry> entries;
  // Generator settings, written as `#@ key value` header lines.
  std::map<std::string, std::string> metadata;

  bool contains(const PhonemeSeq& ps, const SememeSet& ss) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const GoldEntry& e) { return e.phonemes == ps && e.sememes == ss; });
  }

  bool operator==(const GoldLexicon&) const = default;
};

/// `phonemes<TAB>sememes` per entry, in entry order.
inline void dump_gold_lexicon(std::ostream& out, const GoldLexicon& g, const Symbols& sy) {
  for (const auto& [k, v] : g.metadata) out << "#@ " << k << ' ' << v << '\n';
  for (const auto& e : g.entries) out << join_phonemes(sy, e.phonemes) << '\t' << join_sememes(sy, e.sememes) << '\n';
}

inline GoldLexicon load_gold_lexicon(std::istream& in, Symbols& sy) {
  GoldLexicon g;
  std::set<std::pair<PhonemeSeq, SememeSet>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#@ ", 0) == 0) {
      auto rest = line.substr(3);
      auto sp = rest.find(' ');
      if (sp == std::string::npos) throw FormatError("metadata line needs a key and a value", lineno);
      g.metadata[rest.substr(0, sp)] = rest.substr(sp + 1);
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw FormatError("expected 'phonemes<TAB>sememes'", lineno);
    GoldEntry e;
    for (const auto& t : split_tokens(std::string_view(line).substr(0, tab))) e.phonemes.push_back(sy.phonemes.intern(t));
    std::vector<SememeId> ss;
    for (const auto& t : split_tokens(std::string_view(line).substr(tab + 1))) ss.push_back(sy.sememes.intern(t));
    e.sememes = make_sememe_set(std::move(ss));
    if (e.phonemes.empty()) throw FormatError("gold entry has no phonemes", lineno);
    if (e.sememes.empty()) throw FormatError("gold entry has no sememes", lineno);
    if (!seen.emplace(e.phonemes, e.sememes).second) throw FormatError("duplicate gold entry", lineno);
    g.entries.push_back(std::move(e));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Synthetic language.

struct GenConfig {
  std::uint32_t word_count = 30;
  std::uint32_t alphabet_size = 20;
  std::uint32_t word_len_min = 2;
  std::uint32_t word_len_max = 5;
  std::uint32_t utterance_count = 3000;
  std::uint32_t utterance_words_min = 3;
  std::uint32_t utterance_words_max = 8;
  std::uint32_t homonym_pairs = 0;
  std::uint32_t synonym_pairs = 0;
  double noise_rate = 0.0;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 1;

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw ContractError(std::string("invalid generator config: ") + what);
    };
    require(word_len_min >= 1 && word_len_min <= word_len_max, "need 1 <= word_len_min <= word_len_max");
    require(utterance_words_min >= 1 && utterance_words_min <= utterance_words_max,
            "need 1 <= utterance_words_min <= utterance_words_max");
    require(alphabet_size >= 1, "alphabet_size must be >= 1");
    require(noise_rate >= 0.0 && noise_rate <= 1.0, "noise_rate must be in [0,1]");
    require(zipf_exponent >= 0.0, "zipf_exponent must be >= 0");
    require(2 * (homonym_pairs + synonym_pairs) <= word_count, "homonym and synonym pairs need distinct words");
  }

  std::map<std::string, std::string> as_metadata() const {
    auto s = [](auto v) { return std::to_string(v); };
    char noise[32];
    std::snprintf(noise, sizeof noise, "%.6g", noise_rate);
    char zipf[32];
    std::snprintf(zipf, sizeof zipf, "%.6g", zipf_exponent);
    return {{"word_count", s(word_count)},
            {"alphabet_size", s(alphabet_size)},
            {"word_len_min", s(word_len_min)},
            {"word_len_max", s(word_len_max)},
            {"utterance_count", s(utterance_count)},
            {"utterance_words_min", s(utterance_words_min)},
            {"utterance_words_max", s(utterance_words_max)},
            {"homonym_pairs", s(homonym_pairs)},
            {"synonym_pairs", s(synonym_pairs)},
            {"noise_rate", noise},
            {"zipf_exponent", zipf},
            {"seed", s(seed)}};
  }
};

struct SyntheticCorpus {
  GoldLexicon gold;
  std::vector<Utterance> utterances;
  // Gold entry indices each utterance was built from, in order.
  std::vector<std::vector<std::size_t>> sources;
  // Homonym pairs and synonym pairs as gold entry indices.
  std::vector<std::pair<std::size_t, std::size_t>> homonyms;
  std::vector<std::pair<std::size_t, std::size_t>> synonyms;
};

inline std::string phoneme_token(std::uint32_t i, std::uint32_t alphabet_size) {
  if (alphabet_size <= 26) return std::string(1, static_cast<char>('a' + i));
  return "p" + std::to_string(i);
}

inline std::string sememe_token(std::uint32_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "W%02u", i);
  return buf;
}

/// Samples a gold lexicon and a corpus of utterances over it.
///
/// Entries 0..2h-1 form the homonym pairs (2k, 2k+1): the second reuses the
/// first's phonemes with a fresh sememe. The next 2s entries form synonym
/// pairs: the second reuses the first's sememe with fresh phonemes. Every
/// other entry has its own phonemes and a fresh sememe. Word frequency
/// follows a Zipf law over a seeded random ranking of the entries.
///
/// Utterances concatenate the sampled words' phonemes; the sememe bag is
/// the bag union of their sememes. With probability noise_rate the bag then
/// gains a random gold sememe or loses one occurrence, with equal odds.
inline SyntheticCorpus generate_synthetic(const GenConfig& cfg, Symbols& sy) {
  cfg.validate();
  Rng rng = Rng(cfg.seed).derive(StreamTag::kGenerate);

  // Number of distinct phoneme sequences needed.
  const std::uint64_t distinct_forms = cfg.word_count - cfg.homonym_pairs;
  long double capacity = 0;
  for (std::uint32_t L = cfg.word_len_min; L <= cfg.word_len_max; ++L)
    capacity += std::pow(static_cast<long double>(cfg.alphabet_size), static_cast<long double>(L));
  if (capacity < static_cast<long double>(distinct_forms))
    throw GenerationError("alphabet too small for " + std::to_string(distinct_forms) + " distinct words");

  std::vector<PhonemeId> alphabet;
  for (std::uint32_t i = 0; i < cfg.alphabet_size; ++i) alphabet.push_back(sy.phonemes.intern(phoneme_token(i, cfg.alphabet_size)));

  SyntheticCorpus out;
  out.gold.metadata = cfg.as_metadata();
  std::set<PhonemeSeq> used_forms;
  std::uint32_t next_sememe = 0;
  auto fresh_form = [&]() {
    for (std::uint64_t attempt = 0; attempt < 1'000'000; ++attempt) {
      const auto len = cfg.word_len_min + static_cast<std::uint32_t>(rng.below(cfg.word_len_max - cfg.word_len_min + 1));
      PhonemeSeq ps;
      for (std::uint32_t k = 0; k < len; ++k) ps.push_back(alphabet[rng.below(alphabet.size())]);
      if (used_forms.insert(ps).second) return ps;
    }
    throw GenerationError("could not sample a distinct word form");
  };
  auto fresh_sememe = [&]() { return SememeSet{sy.sememes.intern(sememe_token(next_sememe++))}; };

  for (std::uint32_t i = 0; i < cfg.word_count; ++i) {
    GoldEntry e;
    const bool homonym = i < 2 * cfg.homonym_pairs;
    const bool synonym = !homonym && i < 2 * (cfg.homonym_pairs + cfg.synonym_pairs);
    if (homonym && i % 2 == 1) {
      e.phonemes = out.gold.entries[i - 1].phonemes;
      e.sememes = fresh_sememe();
      out.homonyms.emplace_back(i - 1, i);
    } else if (synonym && i % 2 == 1) {
      e.phonemes = fresh_form();
      e.sememes = out.gold.entries[i - 1].sememes;
      out.synonyms.emplace_back(i - 1, i);
    } else {
      e.phonemes = fresh_form();
      e.sememes = fresh_sememe();
    }
    out.gold.entries.push_back(std::move(e));
  }
  if (cfg.word_count == 0) return out;

  // Zipf ranking over a random permutation of entries.
  std::vector<std::size_t> by_rank(cfg.word_count);
  for (std::size_t i = 0; i < by_rank.size(); ++i) by_rank[i] = i;
  for (std::size_t i = by_rank.size(); i > 1; --i) std::swap(by_rank[i - 1], by_rank[rng.below(i)]);
  std::vector<double> cdf(cfg.word_count);
  double total = 0;
  for (std::size_t r = 0; r < cdf.size(); ++r) cdf[r] = total += 1.0 / std::pow(static_cast<double>(r + 1), cfg.zipf_exponent);
  auto sample_word = [&]() {
    const double x = rng.uniform() * total;
    const auto r = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
    return by_rank[std::min(r, by_rank.size() - 1)];
  };

  std::vector<SememeId> all_sememes;
  for (std::uint32_t i = 0; i < next_sememe; ++i) all_sememes.push_back(sy.sememes.intern(sememe_token(i)));

  for (std::uint32_t n = 0; n < cfg.utterance_count; ++n) {
    const auto count = cfg.utterance_words_min +
                       static_cast<std::uint32_t>(rng.below(cfg.utterance_words_max - cfg.utterance_words_min + 1));
    std::vector<std::size_t> src;
    PhonemeSeq ps;
    std::vector<SememeId> bag;
    for (std::uint32_t k = 0; k < count; ++k) {
      const std::size_t w = sample_word();
      src.push_back(w);
      const auto& e = out.gold.entries[w];
      ps.insert(ps.end(), e.phonemes.begin(), e.phonemes.end());
      bag.insert(bag.end(), e.sememes.begin(), e.sememes.end());
    }
    const bool noisy = rng.bernoulli(cfg.noise_rate);
    const bool gain = rng.bernoulli(0.5);
    const std::uint64_t pick = rng.next();
    if (noisy) {
      if (gain || bag.empty()) {
        bag.push_back(all_sememes[pick % all_sememes.size()]);
      } else {
        bag.erase(bag.begin() + static_cast<std::ptrdiff_t>(pick % bag.size()));
      }
    }
    out.utterances.push_back(make_utterance(std::move(ps), bag));
    out.sources.push_back(std::move(src));
  }
  return out;
}

}  // namespace lexacq

#endif  // LEXACQ_CORPUS_HPP
