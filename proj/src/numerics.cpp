#include "levymc/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "levymc/error.hpp"

namespace levymc {

namespace {

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

// Single G-K 15 pass. Boost reports the error on the reference interval
// [-1, 1], so it is rescaled by the half-width here.
Segment kronrod(const RealFunction& g, double lo, double hi) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, lo, hi, 0, 0.0, &error);
  return {lo, hi, value, 0.5 * (hi - lo) * error};
}

// Global adaptive bisection: always split the segment with the largest error
// until the summed error meets max(abs_tol, rel_tol * |value|).
double integrate_unit(const RealFunction& g, double lo, double hi, const QuadratureConfig& cfg,
                      const char* what) {
  validate(cfg);
  std::priority_queue<Segment> heap;
  heap.push(kronrod(g, lo, hi));
  double value = heap.top().value;
  double error = heap.top().error;
  int segments = 1;
  while (true) {
    const double allowed = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
    if (!std::isfinite(value) || !std::isfinite(error)) break;
    if (error <= allowed) return value;
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (segments >= cfg.max_subdivisions || !(worst.lo < mid && mid < worst.hi)) break;
    heap.pop();
    const Segment left = kronrod(g, worst.lo, mid);
    const Segment right = kronrod(g, mid, worst.hi);
    heap.push(left);
    heap.push(right);
    ++segments;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (segments % 64 == 0) {
      // Resum to keep the running totals free of drift.
      std::priority_queue<Segment> copy = heap;
      value = error = 0.0;
      for (; !copy.empty(); copy.pop()) {
        value += copy.top().value;
        error += copy.top().error;
      }
    }
  }
  std::ostringstream msg;
  msg << what << " did not converge: value=" << value << " error estimate=" << error
      << " allowed=" << std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value)) << " after "
      << segments << " segments";
  throw NumericalFailure("quadrature", msg.str());
}

}  // namespace

void validate(const QuadratureConfig& cfg) {
  if (!(cfg.rel_tol >= 1e-14)) throw DomainError("quadrature: rel_tol must be >= 1e-14");
  if (!(cfg.abs_tol > 0.0)) throw DomainError("quadrature: abs_tol must be positive");
  if (cfg.max_subdivisions < 1 || cfg.max_subdivisions > 1000000) {
    throw DomainError("quadrature: max_subdivisions must lie in [1, 1e6]");
  }
}

double tail_quadrature(const RealFunction& f, double lower, const QuadratureConfig& cfg) {
  if (!std::isfinite(lower)) throw DomainError("tail_quadrature: lower limit must be finite");
  auto mapped = [&](double u) {
    const double w = 1.0 - u;
    return f(lower + u / w) / (w * w);
  };
  return integrate_unit(mapped, 0.0, 1.0, cfg, "tail_quadrature");
}

double finite_quadrature(const RealFunction& f, double lower, double upper,
                         const QuadratureConfig& cfg) {
  if (!(lower <= upper)) throw DomainError("finite_quadrature: lower must not exceed upper");
  if (lower == upper) return 0.0;
  // The rule reports its error on the reference interval, so integrate on
  // (0, 1) to keep that estimate in the units of the integral.
  const double width = upper - lower;
  auto mapped = [&](double u) { return width * f(lower + width * u); };
  return integrate_unit(mapped, 0.0, 1.0, cfg, "finite_quadrature");
}

double line_quadrature(const RealFunction& f, double split, const QuadratureConfig& cfg) {
  const double right = tail_quadrature(f, split, cfg);
  const double left = tail_quadrature([&](double v) { return f(2.0 * split - v); }, split, cfg);
  return left + right;
}

double cauchy_convolution_series(double c, double b, double y) {
  const double r = y / b;
  if (!(std::abs(r) < 1.0)) throw DomainError("convolution series: requires |y/b| < 1");
  double sum = 0.0;
  double power = 1.0;
  for (int n = 1; n < 10000; ++n) {
    power *= r;
    const double term = (n + 1.0) / (n + 3.0) * power;
    sum += term;
    if (std::abs(term) < 1e-14 * std::abs(1.0 + 3.0 * sum)) break;
  }
  return c * c / (3.0 * b * b * b) * (1.0 + 3.0 * sum);
}

double cauchy_convolution_closed(double c, double b, double y) {
  const double r = y / b;
  if (r == 0.0) return c * c / (3.0 * b * b * b);
  // 1 + b/y + y/(b-y) regrouped as 1/(r(1-r)) so that large negative r does
  // not cancel at order 1/r.
  const double braces = 1.0 / (r * (1.0 - r)) + 2.0 / (r * r) + 2.0 * std::log1p(-r) / (r * r * r);
  return c * c / (b * b * b) * braces;
}

double incomplete_convolution(const LevyModel& model, double b, double y) {
  if (!(b > 0.0)) throw DomainError("incomplete_convolution: b must be positive");
  if (!(y < b)) throw DomainError("incomplete_convolution: requires y < b");
  switch (model.spec().kind) {
    case ModelKind::Cauchy: {
      const double c = model.spec().c;
      if (std::abs(y) <= 0.5 * b) return cauchy_convolution_series(c, b, y);
      return cauchy_convolution_closed(c, b, y);
    }
  }
  throw DomainError("incomplete_convolution: unsupported model");
}

double density_inversion_oracle(const LevyModel& model, double t, double x,
                                const QuadratureConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("density_inversion_oracle: t must be positive");
  // u = w / (t |psi(1)|) puts the decay of exp(t psi(u)) on a unit scale.
  const double rate = t * std::abs(model.characteristic_exponent(1.0));
  const double scale = rate > 0.0 && std::isfinite(rate) ? 1.0 / rate : 1.0;
  auto integrand = [&](double w) {
    const double u = scale * w;
    return std::cos(u * x) * std::exp(t * model.characteristic_exponent(u));
  };
  return scale * tail_quadrature(integrand, 0.0, cfg) / std::numbers::pi;
}

}  // namespace levymc
