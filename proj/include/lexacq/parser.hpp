#ifndef LEXACQ_PARSER_HPP
#define LEXACQ_PARSER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <thread>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "matcher.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace lexacq {

/// Deviation penalty: |delta| plus a bump of height epsilon at |delta| = 1/2
/// that vanishes at 0 and 1. Quadratic outside [-1, 1].
inline double penalty_f(double delta, double epsilon) {
  const double a = std::abs(delta);
  if (a <= 1.0) {
    const double d = a - 0.5;
    return a + epsilon * (1.0 - 4.0 * d * d);
  }
  return delta * delta;
}

/// Derivative of penalty_f. Uses 0 at delta = 0 and the inner branch at
/// |delta| = 1.
inline double penalty_f_prime(double delta, double epsilon) {
  const double a = std::abs(delta);
  if (a == 0.0) return 0.0;
  if (a <= 1.0) {
    const double slope = 1.0 - 8.0 * epsilon * (a - 0.5);
    return delta > 0 ? slope : -slope;
  }
  return 2.0 * delta;
}

struct ErrorTerms {
  double error = 0.0;
  std::vector<double> delta_p;
  std::vector<double> delta_s;
};

/// Minimized parse: error, one activation per match, and the residual
/// deviations of every phoneme position and sememe slot.
struct ParseResult {
  double error = 0.0;
  std::vector<double> activations;
  std::vector<double> delta_p;
  std::vector<double> delta_s;
};

namespace detail {

/// Sparse view of a match list, built once per parse.
class ParseProblem {
 public:
  ParseProblem(const Utterance& u, std::span<const Match> matches, const LearnerConfig& cfg)
      : cfg_(cfg), n_phon_(u.phonemes.size()), target_s_(semantic_target(u)) {
    cover_p_.resize(matches.size());
    cover_s_.resize(matches.size());
    linear_.resize(matches.size());
    for (std::size_t w = 0; w < matches.size(); ++w) {
      const Match& m = matches[w];
      if (m.pm.size() != n_phon_ || m.sm.size() != target_s_.size())
        throw ContractError("match vectors do not fit the utterance");
      for (std::size_t i = 0; i < m.pm.size(); ++i)
        if (m.pm[i] != 0.0) cover_p_[w].push_back({i, m.pm[i]});
      for (std::size_t j = 0; j < m.sm.size(); ++j)
        if (m.sm[j] != 0.0) cover_s_[w].push_back({j, m.sm[j]});
      linear_[w] = cfg.c3 * static_cast<double>(m.pm_bar) + cfg.c4 * static_cast<double>(m.sm_bar);
    }
  }

  std::size_t size() const noexcept { return linear_.size(); }

  /// Fills deviations and returns E.
  double evaluate(std::span<const double> alpha, std::vector<double>& dp, std::vector<double>& ds) const {
    dp.assign(n_phon_, 1.0);
    ds = target_s_;
    double e = 0.0;
    for (std::size_t w = 0; w < size(); ++w) {
      const double a = alpha[w];
      if (a == 0.0) continue;
      for (const auto& [i, v] : cover_p_[w]) dp[i] -= a * v;
      for (const auto& [j, v] : cover_s_[w]) ds[j] -= a * v;
      e += a * linear_[w];
    }
    for (double d : dp) e += cfg_.c1 * penalty_f(d, cfg_.epsilon);
    for (double d : ds) e += cfg_.c2 * penalty_f(d, cfg_.epsilon);
    return e;
  }

  /// Gradient of E at the point whose deviations are dp, ds.
  void gradient(std::span<const double> dp, std::span<const double> ds, std::vector<double>& g) const {
    fp_.resize(dp.size());
    fs_.resize(ds.size());
    for (std::size_t i = 0; i < dp.size(); ++i) fp_[i] = penalty_f_prime(dp[i], cfg_.epsilon);
    for (std::size_t j = 0; j < ds.size(); ++j) fs_[j] = penalty_f_prime(ds[j], cfg_.epsilon);
    g.assign(size(), 0.0);
    for (std::size_t w = 0; w < size(); ++w) {
      double acc = linear_[w];
      for (const auto& [i, v] : cover_p_[w]) acc -= cfg_.c1 * fp_[i] * v;
      for (const auto& [j, v] : cover_s_[w]) acc -= cfg_.c2 * fs_[j] * v;
      g[w] = acc;
    }
  }

  /// Fixed-step projected descent; returns the lowest iterate seen.
  ParseResult descend(std::vector<double> alpha) const {
    ParseResult best;
    best.error = std::numeric_limits<double>::infinity();
    std::vector<double> g, dp, ds;
    for (std::uint32_t it = 0;; ++it) {
      const double e = evaluate(alpha, dp, ds);
      if (e < best.error) {
        best.error = e;
        best.activations = alpha;
        best.delta_p = dp;
        best.delta_s = ds;
      }
      if (it == cfg_.max_iterations) break;
      gradient(dp, ds, g);
      double max_step = 0.0;
      for (std::size_t w = 0; w < size(); ++w) {
        const double next = std::clamp(alpha[w] - cfg_.learning_rate * g[w], 0.0, 1.0);
        max_step = std::max(max_step, std::abs(next - alpha[w]));
        alpha[w] = next;
      }
      if (max_step < cfg_.convergence_tolerance) break;
    }
    return best;
  }

  /// Change in E from moving alpha[w] by `step`, given current deviations.
  double shift_cost(std::size_t w, double step, std::span<const double> dp, std::span<const double> ds) const {
    double d = step * linear_[w];
    for (const auto& [i, v] : cover_p_[w])
      d += cfg_.c1 * (penalty_f(dp[i] - step * v, cfg_.epsilon) - penalty_f(dp[i], cfg_.epsilon));
    for (const auto& [j, v] : cover_s_[w])
      d += cfg_.c2 * (penalty_f(ds[j] - step * v, cfg_.epsilon) - penalty_f(ds[j], cfg_.epsilon));
    return d;
  }

  void apply_shift(std::size_t w, double step, std::vector<double>& dp, std::vector<double>& ds) const {
    for (const auto& [i, v] : cover_p_[w]) dp[i] -= step * v;
    for (const auto& [j, v] : cover_s_[w]) ds[j] -= step * v;
  }

  /// Rounds a descent result to {0,1} and improves it by single flips and
  /// on/off swaps until no move lowers E.
  ParseResult polish(std::span<const double> start) const {
    std::vector<double> x(size());
    for (std::size_t w = 0; w < size(); ++w) x[w] = start[w] >= 0.5 ? 1.0 : 0.0;
    std::vector<double> dp, ds;
    evaluate(x, dp, ds);
    constexpr double kGain = 1e-12;
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t w = 0; w < size(); ++w) {
        const double step = x[w] == 1.0 ? -1.0 : 1.0;
        if (shift_cost(w, step, dp, ds) < -kGain) {
          apply_shift(w, step, dp, ds);
          x[w] += step;
          improved = true;
        }
      }
      if (improved) continue;
      for (std::size_t on = 0; on < size() && !improved; ++on) {
        if (x[on] == 1.0) continue;
        const double first = shift_cost(on, 1.0, dp, ds);
        apply_shift(on, 1.0, dp, ds);
        for (std::size_t off = 0; off < size(); ++off) {
          if (x[off] == 0.0) continue;
          if (first + shift_cost(off, -1.0, dp, ds) < -kGain) {
            apply_shift(off, -1.0, dp, ds);
            x[on] = 1.0;
            x[off] = 0.0;
            improved = true;
            break;
          }
        }
        if (!improved) apply_shift(on, -1.0, dp, ds);
      }
    }
    return descend(std::move(x));
  }

 private:
  struct Entry {
    std::size_t index;
    double value;
  };
  const LearnerConfig& cfg_;
  std::size_t n_phon_;
  std::vector<double> target_s_;
  std::vector<std::vector<Entry>> cover_p_;
  std::vector<std::vector<Entry>> cover_s_;
  std::vector<double> linear_;
  mutable std::vector<double> fp_, fs_;
};

}  // namespace detail

/// Evaluates E and the deviations for given activations.
inline ErrorTerms parse_error(const Utterance& u, std::span<const Match> matches, std::span<const double> activations,
                              const LearnerConfig& cfg) {
  if (activations.size() != matches.size()) throw ContractError("one activation per match required");
  for (double a : activations)
    if (!(a >= 0.0 && a <= 1.0)) throw ContractError("activation outside [0,1]");
  detail::ParseProblem prob(u, matches, cfg);
  ErrorTerms t;
  t.error = prob.evaluate(activations, t.delta_p, t.delta_s);
  return t;
}

/// Analytic dE/dalpha.
inline std::vector<double> parse_gradient(const Utterance& u, std::span<const Match> matches,
                                          std::span<const double> activations, const LearnerConfig& cfg) {
  detail::ParseProblem prob(u, matches, cfg);
  std::vector<double> dp, ds, g;
  prob.evaluate(activations, dp, ds);
  prob.gradient(dp, ds, g);
  return g;
}

/// Projected gradient descent on E over the unit box, from `cfg.restarts`
/// uniformly random starts. Each descent is followed by a binary polish and
/// the better of the two is kept. Each restart draws from its own derived stream,
/// so the result is the same for any `cfg.threads`. The lowest-error restart
/// wins (ties go to the earlier restart); the all-zero activation vector is
/// returned instead if no restart beats it.
inline ParseResult parse(const Utterance& u, std::span<const Match> matches, const LearnerConfig& cfg,
                         const Rng& stream) {
  detail::ParseProblem prob(u, matches, cfg);
  ParseResult baseline;
  baseline.activations.assign(matches.size(), 0.0);
  baseline.error = prob.evaluate(baseline.activations, baseline.delta_p, baseline.delta_s);
  if (matches.empty()) return baseline;

  const std::size_t n = cfg.restarts;
  std::vector<ParseResult> results(n);
  auto run = [&](std::size_t r) {
    Rng rng = stream.derive(StreamTag::kRestart, {r});
    std::vector<double> alpha(matches.size());
    for (double& a : alpha) a = rng.uniform();
    detail::ParseProblem local = prob;
    ParseResult fractional = local.descend(std::move(alpha));
    ParseResult binary = local.polish(fractional.activations);
    results[r] = binary.error < fractional.error ? std::move(binary) : std::move(fractional);
  };
  const std::size_t workers = std::min<std::size_t>(cfg.threads, n);
  if (workers <= 1) {
    for (std::size_t r = 0; r < n; ++r) run(r);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t r = t; r < n; r += workers) run(r);
      });
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r)
    if (results[r].error < results[best].error) best = r;
  if (baseline.error < results[best].error) return baseline;
  return std::move(results[best]);
}

inline constexpr std::size_t kBruteForceMaxMatches = 20;

/// Test oracle: exhaustive search over all binary activation vectors. Ties
/// keep the lexicographically smallest assignment in enumeration order.
inline ParseResult brute_force_parse(const Utterance& u, std::span<const Match> matches, const LearnerConfig& cfg) {
  if (matches.size() > kBruteForceMaxMatches)
    throw CapacityError("brute-force parse supports at most " + std::to_string(kBruteForceMaxMatches) + " matches");
  detail::ParseProblem prob(u, matches, cfg);
  const std::size_t n = matches.size();
  std::vector<double> alpha(n, 0.0), dp, ds;
  ParseResult best;
  best.error = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t w = 0; w < n; ++w) alpha[w] = (mask >> w) & 1 ? 1.0 : 0.0;
    const double e = prob.evaluate(alpha, dp, ds);
    if (e < best.error) {
      best.error = e;
      best.activations = alpha;
      best.delta_p = dp;
      best.delta_s = ds;
    }
  }
  return best;
}

}  // namespace lexacq

#endif  // LEXACQ_PARSER_HPP
