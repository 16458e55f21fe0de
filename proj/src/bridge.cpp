#include "levymc/bridge.hpp"

#include <sstream>

#include "levymc/error.hpp"

namespace levymc {

double bridge_density(const LevyModel& model, double t, double x, double y) {
  if (!(t > 0.0)) throw DomainError("bridge_density: t must be positive");
  const double h = 0.5 * t;
  return model.marginal_density(h, x) * model.marginal_density(h, y - x) /
         model.marginal_density(t, y);
}

double envelope_constant(const LevyModel& model, double t, double y) {
  if (!(t > 0.0)) throw DomainError("envelope_constant: t must be positive");
  return 2.0 * model.marginal_density(0.5 * t, 0.5 * y) / model.marginal_density(t, y);
}

BridgeSampleStats sample_bridge_midpoint(const LevyModel& model, double t, double y,
                                         RandomStream& rng, std::uint64_t proposal_cap) {
  if (!(t > 0.0)) throw DomainError("sample_bridge_midpoint: t must be positive");
  const double h = 0.5 * t;
  const double peak = model.marginal_density(h, 0.5 * y);
  for (std::uint64_t n = 1; n <= proposal_cap; ++n) {
    const double z = model.sample_increment(h, rng);
    const double x = rng.bernoulli_half() ? y - z : z;
    const double left = model.marginal_density(h, x);
    const double right = model.marginal_density(h, y - x);
    // bridge density / (M * proposal density), with f_t(y) cancelled.
    const double ratio = left * right / (peak * (left + right));
    if (ratio > 1.0 + 1e-12) {
      std::ostringstream msg;
      msg << "acceptance ratio " << ratio << " > 1 at t=" << t << " y=" << y << " x=" << x;
      throw NumericalFailure("bridge", msg.str());
    }
    if (rng.uniform_open() <= ratio) return {n, x};
  }
  std::ostringstream msg;
  msg << "no acceptance after " << proposal_cap << " proposals (t=" << t << ", y=" << y << ")";
  throw NumericalFailure("bridge", msg.str());
}

}  // namespace levymc
