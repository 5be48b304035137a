#ifndef LEXACQ_EVAL_HPP
#define LEXACQ_EVAL_HPP

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "dictionary.hpp"
#include "symbols.hpp"

namespace lexacq {

struct ErrorListEntry {
  std::string phonemes;
  std::string sememes;
  double temperature = 0.0;
  std::uint64_t good_parse_count = 0;

  auto operator<=>(const ErrorListEntry&) const = default;
};

/// Exact-match scoring of a learned dictionary. Only entries that took part
/// in at least one good parse count as learned; the rest are reported in
/// learned_total only.
struct EvalReport {
  std::size_t learned_total = 0;
  std::size_t learned_used = 0;
  std::size_t exact_correct = 0;
  std::size_t gold_size = 0;
  std::size_t gold_learned = 0;
  double precision_used = 0.0;
  double recall_gold = 0.0;
  std::vector<ErrorListEntry> error_list;
};

/// Both arguments must be interned in the same Symbols. Recall counts gold
/// entries present among the used entries.
inline EvalReport evaluate(const Dictionary& d, const GoldLexicon& g, const Symbols& sy) {
  EvalReport r;
  r.learned_total = d.size();
  r.gold_size = g.entries.size();
  for (const auto& [id, w] : d.words()) {
    if (w.good_parse_count == 0) continue;
    ++r.learned_used;
    if (g.contains(w.phonemes, w.sememes)) {
      ++r.exact_correct;
    } else {
      r.error_list.push_back({join_phonemes(sy, w.phonemes), join_sememes(sy, w.sememes), w.temperature, w.good_parse_count});
    }
  }
  for (const auto& e : g.entries) {
    auto id = d.find_content(e.phonemes, e.sememes);
    if (id && d.find(*id)->good_parse_count > 0) ++r.gold_learned;
  }
  r.precision_used = r.learned_used ? static_cast<double>(r.exact_correct) / static_cast<double>(r.learned_used) : 0.0;
  r.recall_gold = r.gold_size ? static_cast<double>(r.gold_learned) / static_cast<double>(r.gold_size) : 0.0;
  std::sort(r.error_list.begin(), r.error_list.end());
  return r;
}

inline void write_report(std::ostream& out, const EvalReport& r) {
  char buf[64];
  out << "learned_total\t" << r.learned_total << '\n';
  out << "learned_used\t" << r.learned_used << '\n';
  out << "exact_correct\t" << r.exact_correct << '\n';
  out << "gold_size\t" << r.gold_size << '\n';
  out << "gold_learned\t" << r.gold_learned << '\n';
  std::snprintf(buf, sizeof buf, "%.6f", r.precision_used);
  out << "precision_used\t" << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.6f", r.recall_gold);
  out << "recall_gold\t" << buf << '\n';
  out << "errors\t" << r.error_list.size() << '\n';
  for (const auto& e : r.error_list) {
    std::snprintf(buf, sizeof buf, "%.6f", e.temperature);
    out << "error\t" << e.phonemes << '\t' << e.sememes << '\t' << buf << '\t' << e.good_parse_count << '\n';
  }
}

}  // namespace lexacq

#endif  // LEXACQ_EVAL_HPP
