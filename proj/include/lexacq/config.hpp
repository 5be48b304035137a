#ifndef LEXACQ_CONFIG_HPP
#define LEXACQ_CONFIG_HPP

#include <charconv>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace lexacq {

/// Every tunable constant of the learner. Defaults are the committed
/// baseline; all of them can be overridden from a `key = value` file.
struct LearnerConfig {
  // Parse error weights: phoneme deviation, sememe deviation, phoneme
  // mismatch, sememe mismatch.
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 2.0;
  double c4 = 6.0;
  // Height of the anti-fractional bump in the deviation penalty.
  double epsilon = 0.25;

  // |delta| beyond this marks a slot under- or overparsed.
  double delta_threshold = 0.5;

  // Match filter.
  std::uint32_t match_max_mismatch = 1;
  double match_min_coverage = 0.5;

  // Projected gradient descent.
  double learning_rate = 0.1;
  std::uint32_t max_iterations = 300;
  double convergence_tolerance = 1e-4;
  std::uint32_t restarts = 3;

  // Cooling.
  double activation_threshold = 0.8;
  double neighbor_threshold = 0.3;
  double cooling_kappa = 0.5;
  double cooling_e0 = 1.0;
  double initial_temperature = 0.95;
  double good_parse_norm_threshold = 0.05;

  // Dictionary upkeep, periods in utterances.
  std::uint64_t trial_period = 200;
  std::uint64_t gc_period = 50;
  std::uint64_t reduce_period = 500;
  double reduce_error_threshold = 0.05;
  double reduce_max_temperature = 0.1;

  // Hypothesis generation.
  std::uint32_t max_new_word_len = 15;
  std::uint32_t max_extension_len = 2;
  // Test hook: a fix trial fires whenever its probability is positive.
  bool force_fix_trials = false;

  std::uint32_t epochs = 1;
  std::uint64_t seed = 1;
  // Worker threads for parse restarts. Results do not depend on it.
  std::uint32_t threads = 1;

  /// Throws ContractError naming the first violated constraint.
  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw ContractError(std::string("invalid config: ") + what);
    };
    require(c1 >= 0 && c2 >= 0 && c3 >= 0 && c4 >= 0, "error weights must be >= 0");
    require(epsilon >= 0, "epsilon must be >= 0");
    require(delta_threshold > 0 && delta_threshold < 1, "delta_threshold must be in (0,1)");
    require(activation_threshold > 0 && activation_threshold < 1, "activation_threshold must be in (0,1)");
    require(neighbor_threshold > 0 && neighbor_threshold < 1, "neighbor_threshold must be in (0,1)");
    require(match_min_coverage >= 0 && match_min_coverage <= 1, "match_min_coverage must be in [0,1]");
    require(learning_rate > 0, "learning_rate must be > 0");
    require(max_iterations >= 1, "max_iterations must be >= 1");
    require(convergence_tolerance > 0, "convergence_tolerance must be > 0");
    require(restarts >= 1, "restarts must be >= 1");
    require(cooling_kappa > 0 && cooling_kappa < 1, "cooling_kappa must be in (0,1)");
    require(cooling_e0 > 0, "cooling_e0 must be > 0");
    require(initial_temperature > 0 && initial_temperature <= 1, "initial_temperature must be in (0,1]");
    require(good_parse_norm_threshold > 0, "good_parse_norm_threshold must be > 0");
    require(trial_period >= 1 && gc_period >= 1 && reduce_period >= 1, "periods must be >= 1");
    require(reduce_error_threshold > 0, "reduce_error_threshold must be > 0");
    require(reduce_max_temperature > 0 && reduce_max_temperature <= 1, "reduce_max_temperature must be in (0,1]");
    require(max_new_word_len >= 1, "max_new_word_len must be >= 1");
    require(epochs >= 1, "epochs must be >= 1");
    require(threads >= 1, "threads must be >= 1");
  }

  /// Visits (name, field) for every field; drives both reading and writing.
  template <typename F>
  void for_each_field(F&& f) {
    f("c1", c1);
    f("c2", c2);
    f("c3", c3);
    f("c4", c4);
    f("epsilon", epsilon);
    f("delta_threshold", delta_threshold);
    f("match_max_mismatch", match_max_mismatch);
    f("match_min_coverage", match_min_coverage);
    f("learning_rate", learning_rate);
    f("max_iterations", max_iterations);
    f("convergence_tolerance", convergence_tolerance);
    f("restarts", restarts);
    f("activation_threshold", activation_threshold);
    f("neighbor_threshold", neighbor_threshold);
    f("cooling_kappa", cooling_kappa);
    f("cooling_e0", cooling_e0);
    f("initial_temperature", initial_temperature);
    f("good_parse_norm_threshold", good_parse_norm_threshold);
    f("trial_period", trial_period);
    f("gc_period", gc_period);
    f("reduce_period", reduce_period);
    f("reduce_error_threshold", reduce_error_threshold);
    f("reduce_max_temperature", reduce_max_temperature);
    f("max_new_word_len", max_new_word_len);
    f("max_extension_len", max_extension_len);
    f("force_fix_trials", force_fix_trials);
    f("epochs", epochs);
    f("seed", seed);
    f("threads", threads);
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_value(std::string_view text, double& out) {
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && p == text.data() + text.size();
}

template <typename Int>
inline bool parse_value(std::string_view text, Int& out) {
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && p == text.data() + text.size();
}

inline bool parse_value(std::string_view text, bool& out) {
  if (text == "true" || text == "1") return out = true, true;
  if (text == "false" || text == "0") return out = false, true;
  return false;
}

}  // namespace detail

/// Applies `key = value` lines onto `cfg`. Blank lines and `#` comments are
/// skipped. Unknown keys, malformed values and duplicate keys are errors.
inline void read_config(std::istream& in, LearnerConfig& cfg) {
  std::map<std::string, std::function<bool(std::string_view)>> setters;
  cfg.for_each_field([&](const char* name, auto& field) {
    setters.emplace(name, [&field](std::string_view v) { return detail::parse_value(v, field); });
  });
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw FormatError("expected 'key = value'", lineno);
    std::string key(detail::trim(body.substr(0, eq)));
    auto value = detail::trim(body.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) throw FormatError("unknown config key '" + key + "'", lineno);
    if (!seen.emplace(key, lineno).second) throw FormatError("duplicate config key '" + key + "'", lineno);
    if (!it->second(value)) throw FormatError("bad value for '" + key + "'", lineno);
  }
  cfg.validate();
}

inline void write_config(std::ostream& out, LearnerConfig cfg) {
  cfg.for_each_field([&](const char* name, auto& field) {
    out << name << " = ";
    if constexpr (std::is_same_v<std::decay_t<decltype(field)>, bool>) {
      out << (field ? "true" : "false");
    } else {
      char buf[32];
      const auto r = std::to_chars(buf, buf + sizeof buf, field);
      out << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf));
    }
    out << '\n';
  });
}

}  // namespace lexacq

#endif  // LEXACQ_CONFIG_HPP
