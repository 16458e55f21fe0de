#include "levymc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levymc/bridge.hpp"
#include "levymc/error.hpp"
#include "levymc/exit_approx.hpp"
#include "levymc/rng.hpp"

namespace levymc {

namespace {

bool wanted(const ValidationOptions& options, const std::string& suite) {
  return options.only.empty() ||
         std::find(options.only.begin(), options.only.end(), suite) != options.only.end();
}

double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

CheckResult check(std::string suite, std::string name, double value, double threshold) {
  return {std::move(suite), std::move(name), value <= threshold, value, threshold};
}

struct BridgeCase {
  double t;
  double y;
};

constexpr BridgeCase kBridgeCases[] = {{1.0, 0.0}, {1.0, 5.0}, {0.01, -0.3}};

}  // namespace

const std::vector<std::string>& validation_suites() {
  static const std::vector<std::string> names{"convolution", "density", "bridge", "envelope",
                                              "decay"};
  return names;
}

double convolution_oracle_error(const LevyModel& model, const QuadratureConfig& cfg) {
  constexpr double kBarriers[] = {0.01, 0.1, 1.0, 10.0};
  constexpr double kRatios[] = {-50.0, -10.0, -3.0, -1.0, -0.75, -0.5, -0.3, -0.1, -0.01,
                                0.0,   0.01,  0.1,  0.2,  0.3,   0.4,  0.49, 0.5,  0.51,
                                0.6,   0.7,   0.8,  0.9,  0.95,  0.98, 0.99};
  double worst = 0.0;
  for (double b : kBarriers) {
    for (double r : kRatios) {
      const double y = r * b;
      // v = b + L w with L the width of the peak at v = b.
      const double width = b - std::max(y, 0.0);
      const double reference =
          width * tail_quadrature(
                      [&](double w) {
                        const double v = b + width * w;
                        return model.levy_density(v) * model.levy_density(y - v);
                      },
                      0.0, cfg);
      worst = std::max(worst, rel_err(incomplete_convolution(model, b, y), reference));
    }
  }
  return worst;
}

double density_oracle_error(const LevyModel& model, const QuadratureConfig& cfg) {
  constexpr double kTimes[] = {0.01, 0.1, 0.5, 1.0, 4.0};
  // x in units of the scale pi c t; kept moderate so the oscillatory
  // inversion integral is well conditioned.
  constexpr double kScaled[] = {-3.0, -1.0, -0.25, 0.0, 0.1, 0.5, 1.0, 1.5, 2.0, 4.0};
  double worst = 0.0;
  for (double t : kTimes) {
    const double scale = std::numbers::pi * model.spec().c * t;
    for (double u : kScaled) {
      const double x = u * scale;
      worst = std::max(worst, rel_err(model.marginal_density(t, x),
                                      density_inversion_oracle(model, t, x, cfg)));
    }
  }
  return worst;
}

std::vector<double> bridge_cdf_sorted(const LevyModel& model, double t, double y,
                                      const std::vector<double>& sorted,
                                      const QuadratureConfig& cfg) {
  std::vector<double> out(sorted.size());
  if (sorted.empty()) return out;
  auto density = [&](double x) { return bridge_density(model, t, x, y); };
  double acc = tail_quadrature([&](double v) { return density(-v); }, -sorted.front(), cfg);
  out[0] = acc;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    acc += finite_quadrature(density, sorted[i - 1], sorted[i], cfg);
    out[i] = acc;
  }
  return out;
}

double bridge_ks_distance(const LevyModel& model, double t, double y, std::vector<double>& samples,
                          const QuadratureConfig& cfg) {
  std::sort(samples.begin(), samples.end());
  const std::vector<double> cdf = bridge_cdf_sorted(model, t, y, samples, cfg);
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(cdf[i] - lo), std::abs(hi - cdf[i])});
  }
  return d;
}

double envelope_grid_ratio(const LevyModel& model, double t, double y) {
  const double h = 0.5 * t;
  const double m = envelope_constant(model, t, y);
  const double fy = model.marginal_density(t, y);
  const double spread = std::abs(y) + 50.0 * std::numbers::pi * model.spec().c * t;
  double worst = 0.0;
  constexpr int kPoints = 4001;
  for (int i = 0; i < kPoints; ++i) {
    const double x = 0.5 * y + spread * (2.0 * i / (kPoints - 1.0) - 1.0);
    const double proposal =
        0.5 * (model.marginal_density(h, x) + model.marginal_density(h, y - x));
    worst = std::max(worst, bridge_density(model, t, x, y) / (m * proposal));
    (void)fy;
  }
  return worst;
}

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  for (const std::string& name : options.only) {
    const auto& known = validation_suites();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw DomainError("validate: unknown suite '" + name + "'");
    }
  }
  if (!options.inject_fault.empty() && options.inject_fault != "quadrature" &&
      options.inject_fault != "bridge") {
    throw DomainError("validate: unknown fault '" + options.inject_fault + "'");
  }
  if (options.bridge_samples < 2) throw DomainError("validate: bridge_samples must be >= 2");
  const auto model = make_model({ModelKind::Cauchy, options.c});

  // The pass thresholds are 1e-8 and looser, so 1e-10 leaves ample margin.
  QuadratureConfig quad;
  quad.rel_tol = 1e-10;
  if (options.inject_fault == "quadrature") {
    quad.rel_tol = 1e-14;
    quad.abs_tol = 1e-300;
    quad.max_subdivisions = 1;
  }
  const std::uint64_t cap = options.inject_fault == "bridge" ? 1 : kDefaultProposalCap;

  std::vector<CheckResult> out;
  if (wanted(options, "convolution")) {
    out.push_back(check("convolution", "incomplete_convolution vs tail quadrature, 100 points",
                        convolution_oracle_error(*model, quad), 1e-8));
  }
  if (wanted(options, "density")) {
    out.push_back(check("density", "marginal_density vs Fourier inversion, 50 points",
                        density_oracle_error(*model, quad), 1e-6));
  }
  if (wanted(options, "bridge")) {
    std::uint64_t stream = 0;
    for (const BridgeCase& bc : kBridgeCases) {
      RandomStream rng(options.seed, stream++);
      std::vector<double> samples(options.bridge_samples);
      double proposals = 0.0;
      for (double& s : samples) {
        const BridgeSampleStats draw = sample_bridge_midpoint(*model, bc.t, bc.y, rng, cap);
        s = draw.value;
        proposals += static_cast<double>(draw.proposals);
      }
      const double n = static_cast<double>(samples.size());
      const std::string tag = "t=" + std::to_string(bc.t) + " y=" + std::to_string(bc.y);
      // The number of proposals is geometric with mean M.
      const double m = envelope_constant(*model, bc.t, bc.y);
      const double geo_sd = std::sqrt(m * (m - 1.0) / n);
      out.push_back(check("bridge", "mean proposals vs M, " + tag,
                          std::abs(proposals / n - m), 4.0 * geo_sd));
      out.push_back(check("bridge", "KS distance, " + tag,
                          bridge_ks_distance(*model, bc.t, bc.y, samples, quad), 1.63 / std::sqrt(n)));
    }
  }
  if (wanted(options, "envelope")) {
    double worst = 0.0;
    for (double t : {0.001, 0.1, 1.0, 10.0}) {
      for (double y : {-100.0, -1.0, 0.0, 0.01, 0.5, 3.0, 1000.0}) {
        worst = std::max(worst, envelope_grid_ratio(*model, t, y));
      }
    }
    out.push_back(check("envelope", "bridge density <= M * proposal on 28 grids", worst,
                        1.0 + 1e-12));
  }
  if (wanted(options, "decay")) {
    // e_p(x, y, t) / t must vanish as t -> 0 for interior endpoints.
    const Domain domain{-kInfinity, 1.0};
    double worst = 0.0;
    for (double y : {-0.5, 0.0, 0.25, 0.75}) {
      const double coarse = exit_estimate(*model, domain, 0.0, y, 1e-3).e_p / 1e-3;
      const double fine = exit_estimate(*model, domain, 0.0, y, 1e-6).e_p / 1e-6;
      worst = std::max(worst, fine / coarse);
    }
    out.push_back(check("decay", "e_p/t at t=1e-6 relative to t=1e-3", worst, 0.1));
    const Domain two_sided{-1.0, 1.0};
    const double coarse = exit_estimate(*model, two_sided, 0.0, 0.1, 1e-3).e_p / 1e-3;
    const double fine = exit_estimate(*model, two_sided, 0.0, 0.1, 1e-6).e_p / 1e-6;
    out.push_back(check("decay", "two-sided e_p/t at t=1e-6 relative to t=1e-3", fine / coarse, 0.1));
  }
  return out;
}

}  // namespace levymc
