#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levymc/levy_model.hpp"
#include "levymc/numerics.hpp"

namespace levymc {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< measured statistic
  double threshold = 0.0;  ///< pass bound for `value`
};

struct ValidationOptions {
  std::vector<std::string> only;  ///< empty runs every suite
  std::uint64_t bridge_samples = 100000;
  std::uint64_t seed = 20240601;
  double c = 1.0;
  /// Test hook: "quadrature" starves the oracle quadrature, "bridge" caps
  /// the rejection sampler at one proposal. Both surface as NumericalFailure.
  std::string inject_fault;
};

/// Names accepted by ValidationOptions::only, in run order.
const std::vector<std::string>& validation_suites();

/// Throws DomainError on an unknown suite name; NumericalFailure propagates.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

/// Largest relative error of incomplete_convolution against tail quadrature
/// over the fixed 100-point (b, y) grid.
double convolution_oracle_error(const LevyModel& model, const QuadratureConfig& cfg = {});

/// Largest relative error of marginal_density against Fourier inversion over
/// the fixed 50-point (t, x) grid.
double density_oracle_error(const LevyModel& model, const QuadratureConfig& cfg = {});

/// Bridge CDF (midpoint of X over [0, t] given X_t = y) at each point of an
/// ascending sequence, by quadrature of the bridge density.
std::vector<double> bridge_cdf_sorted(const LevyModel& model, double t, double y,
                                      const std::vector<double>& sorted,
                                      const QuadratureConfig& cfg = {});

/// Kolmogorov-Smirnov distance of `samples` (sorted in place) against the
/// bridge law.
double bridge_ks_distance(const LevyModel& model, double t, double y, std::vector<double>& samples,
                          const QuadratureConfig& cfg = {});

/// Largest ratio bridge_density / (M * mixture proposal) over a grid of x
/// for the given (t, y); must not exceed one.
double envelope_grid_ratio(const LevyModel& model, double t, double y);

}  // namespace levymc
