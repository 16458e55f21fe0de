#include "levymc/adaptive.hpp"

#include <bit>
#include <cmath>
#include <ostream>
#include <sstream>

#include "levymc/bridge.hpp"
#include "levymc/error.hpp"

namespace levymc {

double DyadicTime::value() const { return std::ldexp(static_cast<double>(numerator), -static_cast<int>(exponent)); }

double Skeleton::time(std::size_t i) const {
  return std::ldexp(static_cast<double>(ticks[i]), -static_cast<int>(resolution));
}

double Skeleton::span(std::size_t i) const {
  return std::ldexp(static_cast<double>(ticks[i + 1] - ticks[i]), -static_cast<int>(resolution));
}

DyadicTime Skeleton::dyadic_time(std::size_t i) const {
  std::uint64_t num = ticks[i];
  unsigned exp = resolution;
  if (num == 0) return {0, 0};
  const unsigned shift = std::min<unsigned>(static_cast<unsigned>(std::countr_zero(num)), exp);
  return {num >> shift, exp - shift};
}

void validate(const EngineConfig& cfg) {
  if (!(cfg.gamma > 0.0)) throw DomainError("engine: gamma must be positive");
  // Beyond 53 bits k / 2^m is no longer an exact double.
  if (cfg.max_depth < 1 || cfg.max_depth > kMaxDepth) {
    throw DomainError("engine: max_depth must lie in [1, 53]");
  }
  validate(cfg.domain);
  make_model(cfg.model);
}

SkeletonGenerator::SkeletonGenerator(EngineConfig cfg) : SkeletonGenerator(cfg, nullptr) {}

SkeletonGenerator::SkeletonGenerator(EngineConfig cfg, IntervalEstimator estimator)
    : cfg_(cfg), model_(make_model(cfg.model)), estimator_(std::move(estimator)) {
  validate(cfg_);
}

ExitEstimate SkeletonGenerator::interval(double x, double y, double dt) const {
  if (estimator_) return estimator_(x, y, dt);
  return exit_estimate(*model_, cfg_.domain, x, y, dt);
}

Skeleton SkeletonGenerator::generate(RandomStream& rng) const {
  const unsigned depth = cfg_.max_depth;
  const double tick = std::ldexp(1.0, -static_cast<int>(depth));
  const Domain& domain = cfg_.domain;

  Skeleton skel;
  skel.resolution = depth;
  const double terminal = model_->sample_increment(1.0, rng);
  skel.ticks = {0, std::uint64_t{1} << depth};
  skel.values = {0.0, terminal};
  if (!domain.contains(terminal)) {
    skel.exited = true;
    return skel;
  }

  // settled[i] marks [ticks[i], ticks[i+1]] as accepted; accepted intervals
  // never change, so they are not re-tested in later sweeps.
  std::vector<char> settled{0};
  std::vector<ExitEstimate> estimates(1);

  std::vector<std::uint64_t> next_ticks;
  std::vector<double> next_values;
  std::vector<char> next_settled;
  std::vector<ExitEstimate> next_estimates;

  bool added = true;
  while (added && !skel.exited) {
    added = false;
    const std::size_t n = skel.ticks.size();
    next_ticks.clear();
    next_values.clear();
    next_settled.clear();
    next_estimates.clear();

    std::size_t i = 0;
    for (; i + 1 < n; ++i) {
      next_ticks.push_back(skel.ticks[i]);
      next_values.push_back(skel.values[i]);
      if (settled[i]) {
        next_settled.push_back(1);
        next_estimates.push_back(estimates[i]);
        continue;
      }
      const std::uint64_t span = skel.ticks[i + 1] - skel.ticks[i];
      const double dt = static_cast<double>(span) * tick;
      const double left = skel.values[i];
      const double right = skel.values[i + 1];
      const ExitEstimate est = interval(left, right, dt);
      if (std::isnan(est.e_p) || std::isnan(est.p_tilde)) {
        std::ostringstream msg;
        msg << "NaN exit estimate at x=" << left << " y=" << right << " dt=" << dt;
        throw NumericalFailure("exit-approx", msg.str());
      }
      if (est.e_p <= cfg_.gamma * dt) {
        next_settled.push_back(1);
        next_estimates.push_back(est);
        continue;
      }
      if (span == 1) {
        ++skel.breached_intervals;
        next_settled.push_back(1);
        next_estimates.push_back(est);
        continue;
      }
      const BridgeSampleStats mid = sample_bridge_midpoint(*model_, dt, right - left, rng);
      skel.bridge_proposals += mid.proposals;
      const double value = left + mid.value;
      next_settled.push_back(0);
      next_estimates.emplace_back();
      next_ticks.push_back(skel.ticks[i] + span / 2);
      next_values.push_back(value);
      next_settled.push_back(0);
      next_estimates.emplace_back();
      added = true;
      if (!domain.contains(value)) {
        skel.exited = true;
        ++i;
        break;
      }
    }
    for (; i + 1 < n; ++i) {
      next_ticks.push_back(skel.ticks[i]);
      next_values.push_back(skel.values[i]);
      next_settled.push_back(settled[i]);
      next_estimates.push_back(estimates[i]);
    }
    next_ticks.push_back(skel.ticks.back());
    next_values.push_back(skel.values.back());

    skel.ticks.swap(next_ticks);
    skel.values.swap(next_values);
    settled.swap(next_settled);
    estimates.swap(next_estimates);
  }
  if (!skel.exited) skel.intervals = std::move(estimates);
  return skel;
}

Skeleton generate_skeleton(const EngineConfig& cfg, RandomStream& rng) {
  return SkeletonGenerator(cfg).generate(rng);
}

double survival_weight(const Skeleton& skel, const IntervalEstimator& estimator) {
  double weight = 1.0;
  for (std::size_t i = 0; i + 1 < skel.size(); ++i) {
    weight *= 1.0 - estimator(skel.values[i], skel.values[i + 1], skel.span(i)).p_tilde;
  }
  return weight;
}

double survival_weight(const Skeleton& skel, const EngineConfig& cfg) {
  const SkeletonGenerator gen(cfg);
  return survival_weight(skel, [&](double x, double y, double dt) { return gen.interval(x, y, dt); });
}

double bias_contribution(const Skeleton& skel, const IntervalEstimator& estimator) {
  if (skel.exited) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < skel.size(); ++i) {
    total += estimator(skel.values[i], skel.values[i + 1], skel.span(i)).e_p;
  }
  return total;
}

double bias_contribution(const Skeleton& skel, const EngineConfig& cfg) {
  const SkeletonGenerator gen(cfg);
  return bias_contribution(skel, [&](double x, double y, double dt) { return gen.interval(x, y, dt); });
}

std::string verify_skeleton(const Skeleton& skel, const EngineConfig& cfg) {
  std::ostringstream err;
  const std::size_t n = skel.size();
  if (n < 2 || skel.values.size() != n) {
    err << "size mismatch: " << n << " times, " << skel.values.size() << " values";
    return err.str();
  }
  if (skel.resolution > kMaxDepth || skel.resolution > cfg.max_depth) {
    err << "resolution " << skel.resolution << " exceeds max_depth";
    return err.str();
  }
  if (skel.ticks.front() != 0 || skel.ticks.back() != (std::uint64_t{1} << skel.resolution)) {
    return "skeleton does not span [0, 1]";
  }
  if (skel.values.front() != 0.0) return "skeleton does not start at 0";
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::uint64_t span = skel.ticks[i + 1] - skel.ticks[i];
    if (skel.ticks[i + 1] <= skel.ticks[i]) {
      err << "times not strictly increasing at " << i;
      return err.str();
    }
    // Bisection only produces intervals [j 2^-m, (j+1) 2^-m].
    if (!std::has_single_bit(span) || skel.ticks[i] % span != 0) {
      err << "interval " << i << " is not a dyadic cell";
      return err.str();
    }
    const DyadicTime t = skel.dyadic_time(i);
    if (std::ldexp(static_cast<double>(t.numerator), -static_cast<int>(t.exponent)) != skel.time(i)) {
      err << "time " << i << " not exactly representable";
      return err.str();
    }
  }
  bool any_outside = false;
  for (double v : skel.values) any_outside = any_outside || !cfg.domain.contains(v);
  if (skel.exited) {
    if (!any_outside) return "exited flag set but every value is inside the domain";
    return {};
  }
  if (any_outside) return "value outside the domain without exited flag";

  const SkeletonGenerator gen(cfg);
  std::uint32_t breaches = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = skel.span(i);
    const ExitEstimate est = gen.interval(skel.values[i], skel.values[i + 1], dt);
    if (!(est.e_p <= cfg.gamma * dt)) {
      if (skel.ticks[i + 1] - skel.ticks[i] != 1) {
        err << "interval " << i << " has e_p=" << est.e_p << " > gamma*dt=" << cfg.gamma * dt;
        return err.str();
      }
      ++breaches;
    }
  }
  if (breaches != skel.breached_intervals) {
    err << "breach count " << skel.breached_intervals << " but " << breaches << " found";
    return err.str();
  }
  return {};
}

void write_skeleton_csv(std::ostream& os, std::uint64_t path_id, const Skeleton& skel) {
  const auto old_precision = os.precision(17);
  for (std::size_t i = 0; i < skel.size(); ++i) {
    const DyadicTime t = skel.dyadic_time(i);
    os << path_id << ',' << t.numerator << ',' << t.denominator() << ',' << skel.values[i] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace levymc
