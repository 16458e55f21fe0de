#pragma once

#include <cstdint>

#include "levymc/levy_model.hpp"

namespace levymc {

struct BridgeSampleStats {
  std::uint64_t proposals = 1;  ///< rejection iterations consumed, >= 1
  double value = 0.0;
};

inline constexpr std::uint64_t kDefaultProposalCap = 1'000'000;

/// Density at x of X_{t/2} given X_t = y: f_{t/2}(x) f_{t/2}(y - x) / f_t(y).
double bridge_density(const LevyModel& model, double t, double x, double y);

/// Rejection constant M = 2 f_{t/2}(y/2) / f_t(y) of the bridge density
/// against the mixture proposal (f_{t/2}(x) + f_{t/2}(y - x)) / 2.
double envelope_constant(const LevyModel& model, double t, double y);

/// Exact draw of X_{t/2} given X_t = y by rejection from the mixture
/// proposal. Throws NumericalFailure("bridge", ...) after `proposal_cap`
/// rejected proposals, or if an acceptance ratio exceeds one.
BridgeSampleStats sample_bridge_midpoint(const LevyModel& model, double t, double y,
                                         RandomStream& rng,
                                         std::uint64_t proposal_cap = kDefaultProposalCap);

}  // namespace levymc
