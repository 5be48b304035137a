#ifndef LEXACQ_SYMBOLS_HPP
#define LEXACQ_SYMBOLS_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace lexacq {

/// Dense integer id distinguished by a tag type, so phoneme ids and sememe
/// ids cannot be mixed up.
template <typename Tag>
struct StrongId {
  std::uint32_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint32_t v) : value(v) {}

  constexpr auto operator<=>(const StrongId&) const = default;
};

struct PhonemeTag {};
struct SememeTag {};
using PhonemeId = StrongId<PhonemeTag>;
using SememeId = StrongId<SememeTag>;

/// Bijective token <-> id interning. Ids are assigned densely in first-seen
/// order.
template <typename Id>
class SymbolTable {
 public:
  Id intern(std::string_view token) {
    auto it = ids_.find(std::string(token));
    if (it != ids_.end()) return it->second;
    Id id(static_cast<std::uint32_t>(tokens_.size()));
    tokens_.emplace_back(token);
    ids_.emplace(tokens_.back(), id);
    return id;
  }

  /// Lookup without interning; returns false if the token is unknown.
  bool find(std::string_view token, Id& out) const {
    auto it = ids_.find(std::string(token));
    if (it == ids_.end()) return false;
    out = it->second;
    return true;
  }

  const std::string& token(Id id) const {
    if (id.value >= tokens_.size()) throw ContractError("unknown symbol id " + std::to_string(id.value));
    return tokens_[id.value];
  }

  std::size_t size() const noexcept { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Id> ids_;
};

/// The two symbol spaces of a run.
struct Symbols {
  SymbolTable<PhonemeId> phonemes;
  SymbolTable<SememeId> sememes;
};

/// Splits on runs of spaces/tabs. Empty input gives no tokens.
inline std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace lexacq

template <typename Tag>
struct std::hash<lexacq::StrongId<Tag>> {
  std::size_t operator()(const lexacq::StrongId<Tag>& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

#endif  // LEXACQ_SYMBOLS_HPP
