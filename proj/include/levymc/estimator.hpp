#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levymc/adaptive.hpp"

namespace levymc {

enum class PayoffKind { Indicator, Constant, Polynomial, Put, Call };

/// Bounded payoff F applied to the terminal value X_1.
class Payoff {
 public:
  Payoff() = default;

  static Payoff indicator();
  static Payoff constant(double value);
  /// sum_k coeffs[k] * clamp(x, -cap, cap)^k.
  static Payoff polynomial(std::vector<double> coeffs, double cap);
  /// max(strike - e^x, 0).
  static Payoff put(double strike);
  /// min(max(e^x - strike, 0), cap).
  static Payoff call(double strike, double cap);

  /// Parses "indicator", "constant:V", "poly:cap=C:a0,a1,...", "put:K=V" or
  /// "call:K=V,cap=C". Throws DomainError on malformed input.
  static Payoff parse(const std::string& text);

  PayoffKind kind() const { return kind_; }
  double operator()(double x) const;
  double sup_abs() const;
  std::string describe() const;

 private:
  PayoffKind kind_ = PayoffKind::Indicator;
  std::vector<double> coeffs_;
  double strike_ = 0.0;
  double cap_ = 0.0;
};

struct McResult {
  double gamma_or_n = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;  ///< sample std / sqrt(paths)
  double bias_bound = 0.0;  ///< NaN for the uniform baseline
  std::uint64_t paths = 0;
  double mean_skeleton_points = 0.0;
  std::uint64_t depth_breaches = 0;  ///< paths with at least one breached interval
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  double generation_seconds = 0.0;  ///< summed over workers
  double weight_seconds = 0.0;      ///< summed over workers
};

/// Worker count from LEVY_MC_THREADS when set, else `requested`, else the
/// number of logical cores.
unsigned resolve_workers(unsigned requested);

/// (1/M) sum F(X_1^k) N~(skeleton k) over independent adaptive skeletons.
/// Path k uses stream (seed, k); results do not depend on `workers`.
McResult estimate_adaptive(const EngineConfig& cfg, const Payoff& payoff, std::uint64_t n_paths,
                           std::uint64_t seed, unsigned workers = 0);

/// Plain discretisation: killed when any of X_{k/n}, k = 1..n, leaves D.
McResult estimate_uniform(const EngineConfig& cfg, const Payoff& payoff, std::uint64_t n_grid,
                          std::uint64_t n_paths, std::uint64_t seed, unsigned workers = 0);

/// Uniform estimates on nested grids from common paths: every grid must
/// divide the largest one, which is simulated once per path. Wall time is
/// shared and reported on every row.
std::vector<McResult> estimate_uniform_coupled(const EngineConfig& cfg, const Payoff& payoff,
                                               const std::vector<std::uint64_t>& grids,
                                               std::uint64_t n_paths, std::uint64_t seed,
                                               unsigned workers = 0);

enum class SweepMode { Adaptive, Uniform };

struct SweepConfig {
  SweepMode mode = SweepMode::Adaptive;
  EngineConfig engine;
  Payoff payoff;
  std::vector<double> schedule;  ///< gammas or grid sizes
  std::uint64_t n_paths = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  /// Uniform mode only. When absent an adaptive run at gamma / 10 with
  /// 10x the paths is used (and cached for the process).
  std::optional<double> reference;
};

struct SweepResult {
  std::vector<McResult> rows;
  /// Least-squares slope of log(error proxy) against log(wall seconds);
  /// NaN with fewer than two usable rows.
  double slope = 0.0;
  double reference = 0.0;  ///< NaN in adaptive mode
};

/// Least-squares slope of log(y) on log(x) over pairs with x, y > 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

SweepResult convergence_sweep(const SweepConfig& cfg);

/// Reference value for uniform sweeps, memoised per configuration.
double sweep_reference(const EngineConfig& cfg, const Payoff& payoff, std::uint64_t n_paths,
                       std::uint64_t seed, unsigned workers = 0);

/// Sum in index order by pairwise splitting.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace levymc
