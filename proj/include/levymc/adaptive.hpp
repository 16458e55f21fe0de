#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "levymc/exit_approx.hpp"
#include "levymc/levy_model.hpp"
#include "levymc/rng.hpp"

namespace levymc {

/// k / 2^m in lowest terms.
struct DyadicTime {
  std::uint64_t numerator = 0;
  unsigned exponent = 0;

  double value() const;
  std::uint64_t denominator() const { return std::uint64_t{1} << exponent; }
  friend bool operator==(const DyadicTime&, const DyadicTime&) = default;
};

/// Sampling times and values of one path on [0, 1].
///
/// Times are stored as integer ticks of 2^-resolution so that grid keys
/// never drift. `intervals[i]` caches the estimate that accepted
/// [times[i], times[i+1]]; it is only complete when the path did not exit.
struct Skeleton {
  unsigned resolution = 0;
  std::vector<std::uint64_t> ticks;
  std::vector<double> values;
  std::vector<ExitEstimate> intervals;
  bool exited = false;
  std::uint32_t breached_intervals = 0;
  std::uint64_t bridge_proposals = 0;

  std::size_t size() const { return ticks.size(); }
  double time(std::size_t i) const;
  /// Exact length of [times[i], times[i+1]].
  double span(std::size_t i) const;
  DyadicTime dyadic_time(std::size_t i) const;
  double terminal() const { return values.back(); }
};

inline constexpr unsigned kMaxDepth = 53;

struct EngineConfig {
  double gamma = 0.01;
  unsigned max_depth = 53;
  Domain domain;
  LevyModelSpec model;
};

/// Throws DomainError on gamma <= 0, max_depth outside [1, 53] or an
/// invalid domain/model.
void validate(const EngineConfig& cfg);

/// Exit estimate for an interval (x, y, dt); injectable for testing.
using IntervalEstimator = std::function<ExitEstimate(double x, double y, double dt)>;

/// Adaptive dyadic refinement of a path skeleton: an interval is split at
/// its midpoint (drawn from the bridge law) while e_p > gamma * length.
class SkeletonGenerator {
 public:
  explicit SkeletonGenerator(EngineConfig cfg);
  SkeletonGenerator(EngineConfig cfg, IntervalEstimator estimator);

  const EngineConfig& config() const { return cfg_; }
  const LevyModel& model() const { return *model_; }

  ExitEstimate interval(double x, double y, double dt) const;

  Skeleton generate(RandomStream& rng) const;

 private:
  EngineConfig cfg_;
  std::shared_ptr<const LevyModel> model_;
  IntervalEstimator estimator_;
};

Skeleton generate_skeleton(const EngineConfig& cfg, RandomStream& rng);

/// Product of (1 - p~) over consecutive skeleton points.
double survival_weight(const Skeleton& skel, const EngineConfig& cfg);
double survival_weight(const Skeleton& skel, const IntervalEstimator& estimator);

/// Sum of e_p over consecutive points; 0 for an exited skeleton.
double bias_contribution(const Skeleton& skel, const EngineConfig& cfg);
double bias_contribution(const Skeleton& skel, const IntervalEstimator& estimator);

/// Post-hoc check of the skeleton invariants, recomputing every e_p.
/// Returns an empty string on success, otherwise a description of the first
/// violation.
std::string verify_skeleton(const Skeleton& skel, const EngineConfig& cfg);

/// Writes `path_id,time_num,time_den,value` rows.
void write_skeleton_csv(std::ostream& os, std::uint64_t path_id, const Skeleton& skel);

}  // namespace levymc
