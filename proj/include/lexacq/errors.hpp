#ifndef LEXACQ_ERRORS_HPP
#define LEXACQ_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexacq {

/// Malformed input text (corpus lines, dumps, config files).
/// line() is 1-based; 0 means the error is not tied to a line.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A caller broke an operation's precondition.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The brute-force oracle was asked to enumerate more than it allows.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// The synthetic generator cannot satisfy its configuration.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lexacq

#endif  // LEXACQ_ERRORS_HPP
