#ifndef LEXACQ_DICTIONARY_HPP
#define LEXACQ_DICTIONARY_HPP

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "symbols.hpp"
#include "types.hpp"

namespace lexacq {

enum class UpsertStatus { kInserted, kDuplicate, kRejected };

struct UpsertOutcome {
  UpsertStatus status;
  // Id of the inserted word, or of the existing duplicate. Unset on rejection.
  std::optional<WordId> id;
};

/// The learner's single lexicon. Words are kept in stable-id order, so every
/// iteration over the dictionary is deterministic. Single writer; concurrent
/// readers are fine while no one mutates.
class Dictionary {
 public:
  using Map = std::map<WordId, Word>;

  /// Inserts `w` unless a word with the same phonemes and sememes is already
  /// live. A new stable id is assigned on insertion; `w.stable_id` is ignored.
  UpsertOutcome upsert(Word w) {
    if (w.phonemes.empty() || w.sememes.empty()) return {UpsertStatus::kRejected, std::nullopt};
    if (w.temperature < 0.0 || w.temperature > 1.0) throw ContractError("word temperature outside [0,1]");
    w.sememes = make_sememe_set(std::move(w.sememes));
    if (auto existing = find_content(w.phonemes, w.sememes)) return {UpsertStatus::kDuplicate, existing};
    w.stable_id = allocate_id();
    const WordId id = w.stable_id;
    content_.emplace(std::make_pair(w.phonemes, w.sememes), id);
    for (PhonemeId p : std::set<PhonemeId>(w.phonemes.begin(), w.phonemes.end())) by_phoneme_[p].insert(id);
    words_.emplace(id, std::move(w));
    return {UpsertStatus::kInserted, id};
  }

  bool erase(WordId id) {
    auto it = words_.find(id);
    if (it == words_.end()) return false;
    const Word& w = it->second;
    content_.erase(std::make_pair(w.phonemes, w.sememes));
    for (PhonemeId p : w.phonemes) {
      auto ix = by_phoneme_.find(p);
      if (ix == by_phoneme_.end()) continue;
      ix->second.erase(id);
      if (ix->second.empty()) by_phoneme_.erase(ix);
    }
    words_.erase(it);
    return true;
  }

  std::optional<WordId> find_content(const PhonemeSeq& phonemes, const SememeSet& sememes) const {
    auto it = content_.find(std::make_pair(phonemes, sememes));
    if (it == content_.end()) return std::nullopt;
    return it->second;
  }

  const Word* find(WordId id) const {
    auto it = words_.find(id);
    return it == words_.end() ? nullptr : &it->second;
  }

  Word* find(WordId id) {
    auto it = words_.find(id);
    return it == words_.end() ? nullptr : &it->second;
  }

  /// Words containing phoneme `p` at least once.
  const std::set<WordId>& words_with(PhonemeId p) const {
    static const std::set<WordId> kEmpty;
    auto it = by_phoneme_.find(p);
    return it == by_phoneme_.end() ? kEmpty : it->second;
  }

  /// Reserves a stable id without inserting. Used for transient candidate
  /// words so they can be referred to before admission.
  WordId allocate_id() { return WordId{next_id_++}; }

  const Map& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  std::uint64_t utterance_counter() const noexcept { return utterance_counter_; }
  std::uint64_t advance_counter() { return ++utterance_counter_; }
  void set_utterance_counter(std::uint64_t c) {
    if (c < utterance_counter_) throw ContractError("utterance counter is monotone");
    utterance_counter_ = c;
  }

 private:
  Map words_;
  std::map<std::pair<PhonemeSeq, SememeSet>, WordId> content_;
  std::map<PhonemeId, std::set<WordId>> by_phoneme_;
  std::uint64_t utterance_counter_ = 0;
  std::uint64_t next_id_ = 0;
};

inline std::string join_phonemes(const Symbols& sy, const PhonemeSeq& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ' ';
    out += sy.phonemes.token(ps[i]);
  }
  return out;
}

/// Sememe tokens sorted lexicographically by text.
inline std::string join_sememes(const Symbols& sy, const SememeSet& ss) {
  std::vector<std::string> toks;
  toks.reserve(ss.size());
  for (SememeId s : ss) toks.push_back(sy.sememes.token(s));
  std::sort(toks.begin(), toks.end());
  std::string out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out += ' ';
    out += toks[i];
  }
  return out;
}

/// One word per line: temperature, phonemes, sememes, good_parse_count,
/// created_at, tab-separated. Ordered by descending good_parse_count, then
/// phonemes, then sememes.
inline void dump_dictionary(std::ostream& out, const Dictionary& d, const Symbols& sy) {
  struct Row {
    std::uint64_t uses;
    std::string phonemes, sememes;
    const Word* w;
  };
  std::vector<Row> rows;
  rows.reserve(d.size());
  for (const auto& [id, w] : d.words()) rows.push_back({w.good_parse_count, join_phonemes(sy, w.phonemes), join_sememes(sy, w.sememes), &w});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.uses != b.uses) return a.uses > b.uses;
    if (a.phonemes != b.phonemes) return a.phonemes < b.phonemes;
    return a.sememes < b.sememes;
  });
  char temp[32];
  for (const auto& r : rows) {
    std::snprintf(temp, sizeof temp, "%.6f", r.w->temperature);
    out << temp << '\t' << r.phonemes << '\t' << r.sememes << '\t' << r.w->good_parse_count << '\t'
        << r.w->created_at << '\n';
  }
}

/// Reads a dump. Words are inserted in file order; the utterance counter is
/// set to the largest created_at seen.
inline Dictionary load_dictionary(std::istream& in, Symbols& sy) {
  Dictionary d;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t max_created = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 5) throw FormatError("expected 5 tab-separated fields", lineno);
    Word w;
    try {
      std::size_t used = 0;
      w.temperature = std::stod(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument("temperature");
      w.good_parse_count = std::stoull(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument("count");
      w.created_at = std::stoull(fields[4], &used);
      if (used != fields[4].size()) throw std::invalid_argument("created_at");
    } catch (const std::exception&) {
      throw FormatError("malformed numeric field", lineno);
    }
    if (w.temperature < 0.0 || w.temperature > 1.0) throw FormatError("temperature outside [0,1]", lineno);
    for (const auto& t : split_tokens(fields[1])) w.phonemes.push_back(sy.phonemes.intern(t));
    std::vector<SememeId> ss;
    for (const auto& t : split_tokens(fields[2])) ss.push_back(sy.sememes.intern(t));
    w.sememes = make_sememe_set(std::move(ss));
    if (w.phonemes.empty()) throw FormatError("word has no phonemes", lineno);
    if (w.sememes.empty()) throw FormatError("word has no sememes", lineno);
    max_created = std::max(max_created, w.created_at);
    if (d.upsert(std::move(w)).status != UpsertStatus::kInserted) throw FormatError("duplicate word", lineno);
  }
  d.set_utterance_counter(max_created);
  return d;
}

}  // namespace lexacq

#endif  // LEXACQ_DICTIONARY_HPP
