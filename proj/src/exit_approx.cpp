#include "levymc/exit_approx.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "levymc/error.hpp"
#include "levymc/numerics.hpp"

namespace levymc {

namespace {

double clamp_unit(double p) { return std::min(std::max(p, 0.0), 1.0); }

// Integral of s(u) s(y - u) over the complement of (a, b), start at 0.
double outside_convolution(const LevyModel& model, const Domain& d, double y) {
  double total = 0.0;
  if (d.b != kInfinity) total += incomplete_convolution(model, d.b, y);
  // Lower tail mapped onto an upper one by u -> -u; needs a symmetric s.
  if (d.a != -kInfinity) total += incomplete_convolution(model, -d.a, -y);
  return total;
}

void require_cauchy(const LevyModel& model, const char* what) {
  if (model.spec().kind != ModelKind::Cauchy) {
    throw DomainError(std::string(what) + ": only defined for the Cauchy model");
  }
}

}  // namespace

void validate(const Domain& domain) {
  if (std::isnan(domain.a) || std::isnan(domain.b)) throw DomainError("domain: NaN barrier");
  if (!(domain.a < 0.0 && domain.b > 0.0)) {
    throw DomainError("domain: requires a < 0 < b");
  }
  if (domain.a == -kInfinity && domain.b == kInfinity) {
    throw DomainError("domain: at least one barrier must be finite");
  }
}

double tail_constant(const TruncationQuantities& q, double eta) {
  return std::exp(log_tail_bound(q, eta, 1.0));
}

double log_tail_bound(const TruncationQuantities& q, double eta, double t) {
  if (!(eta > 0.0)) throw DomainError("tail bound: eta must be positive");
  const double ratio = std::numbers::e * q.sigma2_eps * t / (q.epsilon * eta);
  return eta / q.epsilon * std::log(ratio);
}

double drift_horizon(const TruncationQuantities& q, double eta) {
  if (q.mu_eps <= 0.0) return kInfinity;
  return eta / (2.0 * q.mu_eps);
}

double mode_horizon(const LevyModel& model, const TruncationQuantities& q, double eta) {
  if (model.symmetric()) return kInfinity;
  const double sigma = std::sqrt(q.sigma2_eps);
  const double mu = std::abs(q.mu_eps);
  double root = 0.0;  // sqrt(t1)
  if (mu == 0.0) {
    if (sigma == 0.0) return kInfinity;
    root = eta / (std::sqrt(3.0) * sigma);
  } else {
    root = (-std::sqrt(3.0) * sigma + std::sqrt(3.0 * q.sigma2_eps + 4.0 * mu * eta)) / (2.0 * mu);
  }
  return root * root;
}

ErrorBoundConstants error_bound_constants(const LevyModel& model, double eta, double epsilon) {
  const TruncationQuantities q = model.truncation_quantities(epsilon);
  return {tail_constant(q, eta), drift_horizon(q, eta), mode_horizon(model, q, eta)};
}

ExitApproximation p_tilde(const LevyModel& model, const Domain& domain, double x, double y,
                          double t) {
  if (!(t > 0.0)) throw DomainError("p_tilde: t must be positive");
  if (!domain.contains(x) || !domain.contains(y)) return {1.0, 1.0};
  const Domain shifted = domain.translated(x);
  const double target = y - x;
  const double raw = 0.5 * t * t * outside_convolution(model, shifted, target) /
                     model.marginal_density(t, target);
  return {clamp_unit(raw), raw};
}

CauchyCutoffs default_cauchy_cutoffs(double b, double y) {
  if (!(b > 0.0) || !(y < b)) throw DomainError("default_cauchy_cutoffs: requires y < b, b > 0");
  const double gap = b - y;
  const double eps = std::min(gap / 8.0, b / 2.0);
  double eps0 = std::min(gap / 4.0, b / 2.0);
  const double eps0_limit = std::min((gap - eps) / 2.0, b - eps);
  if (!(eps0 < eps0_limit)) eps0 = 0.99 * eps0_limit;
  return {eps, eps0};
}

CauchyErrorTerms cauchy_error_terms(const LevyModel& model, double b, double y, double t) {
  if (!(b > 0.0) || !(y < b)) throw DomainError("cauchy_error_terms: requires y < b, b > 0");
  return cauchy_error_terms(model, b, y, t, default_cauchy_cutoffs(b, y));
}

namespace {

CauchyErrorTerms cauchy_terms_impl(const LevyModel& model, double b, double y, double t,
                                   CauchyCutoffs cutoffs, double convolution, double density) {
  const double c = model.spec().c;
  const double gap = b - y;
  const double eps = cutoffs.epsilon;
  const double eps0 = cutoffs.epsilon0;
  if (!(eps > 0.0) || !(eps <= std::min(gap / 8.0, b / 2.0))) {
    throw DomainError("cauchy_error_terms: epsilon must lie in (0, (b-y)/8 ^ b/2]");
  }
  if (!(eps0 > 0.0) || !(eps0 < std::min((gap - eps) / 2.0, b - eps))) {
    throw DomainError("cauchy_error_terms: epsilon0 must lie in (0, (b-y-eps)/2 ^ (b-eps))");
  }
  CauchyErrorTerms out;
  out.epsilon = eps;
  out.epsilon0 = eps0;

  const TruncationQuantities q = model.truncation_quantities(eps);
  const double lam = q.lambda_eps;
  const double a = q.a_eps;
  const double sigma = std::sqrt(q.sigma2_eps);
  const double lt = lam * t;

  // Tail bounds C(eta, eps) t^(eta/eps) for the three levels used below.
  const double log_k_half_gap = log_tail_bound(q, gap / 2.0, t);
  const double log_k_barrier = log_tail_bound(q, b, t);
  const double log_k_eps0 = log_tail_bound(q, eps0, t);

  out.no_jump = 4.0 / gap * std::exp(log_k_half_gap - lt);
  out.one_jump_1 = a * t * std::exp(log_k_barrier - lt);
  out.one_jump_2 = 2.0 * a * t * std::exp(log_k_half_gap - lt);
  out.two_jumps_1 = 0.5 * a * lam * t * t * std::exp(log_k_barrier - lt);
  out.two_jumps_3 = a * lam * t * t * std::exp(log_k_half_gap - lt);
  // Both arguments of s exceed eps under the eps0 constraint, so s and the
  // truncated density coincide there.
  out.two_jumps_2 = 2.0 * a * lam * t * t * std::exp(log_k_eps0 - lt) +
                    2.0 * std::exp(-lt) * std::pow(t, 2.5) * sigma *
                        model.levy_density(b - eps0) * model.levy_density(gap - 2.0 * eps0);
  const double many_tail =
      std::exp(log_k_barrier) + 2.0 * std::exp(log_k_half_gap) + 2.0 * std::exp(log_k_eps0);
  out.many_jumps = a * lam * lam * t * t * t / 6.0 * many_tail +
                   16.0 * std::numbers::pi * c * c * c * t * t * t /
                       (3.0 * eps * (b - eps0) * (b - eps0) * (gap - 2.0 * eps0)) *
                       std::exp(2.0 * std::numbers::pi * c * t / eps - lt);
  // The leading two-jump term carries a factor exp(-lambda t) that p~ drops.
  out.killing_factor = -std::expm1(-lt) * 0.5 * t * t * convolution;
  out.density = density;
  return out;
}

}  // namespace

CauchyErrorTerms cauchy_error_terms(const LevyModel& model, double b, double y, double t,
                                    CauchyCutoffs cutoffs) {
  require_cauchy(model, "cauchy_error_terms");
  if (!(t > 0.0)) throw DomainError("cauchy_error_terms: t must be positive");
  if (!(b > 0.0) || !(y < b)) throw DomainError("cauchy_error_terms: requires y < b, b > 0");
  return cauchy_terms_impl(model, b, y, t, cutoffs, incomplete_convolution(model, b, y),
                           model.marginal_density(t, y));
}

double error_bound_cauchy(const LevyModel& model, double b, double y, double t) {
  if (!(t > 0.0)) throw DomainError("error_bound_cauchy: t must be positive");
  if (!(y < b)) return 0.0;
  require_cauchy(model, "error_bound_cauchy");
  if (!(b > 0.0)) throw DomainError("error_bound_cauchy: requires b > 0");
  const CauchyCutoffs base = default_cauchy_cutoffs(b, y);
  const double convolution = incomplete_convolution(model, b, y);
  const double density = model.marginal_density(t, y);
  // Shrinking epsilon only relaxes the epsilon0 constraint, so every rung
  // stays admissible. The ladder stops at the first rung that does not improve.
  double best = kInfinity;
  CauchyCutoffs cut = base;
  for (int rung = 0; rung < kCauchyCutoffRungs; ++rung) {
    const double bound =
        cauchy_terms_impl(model, b, y, t, cut, convolution, density).sum() / density;
    if (!(bound < best)) break;
    best = bound;
    cut.epsilon /= 4.0;
    if (rung > 0) cut.epsilon0 /= 4.0;
  }
  return best;
}

double error_bound_general(const LevyModel& model, const Domain& domain, double y, double t,
                           double phi_sup, double phi_lip, double epsilon) {
  validate(domain);
  if (!(t > 0.0)) throw DomainError("error_bound_general: t must be positive");
  if (!domain.contains(y)) throw DomainError("error_bound_general: y must lie inside the domain");
  if (!(phi_sup >= 0.0) || !(phi_lip >= 0.0)) {
    throw DomainError("error_bound_general: norms of phi must be nonnegative");
  }
  const double c = std::min(domain.b, -domain.a);
  const double delta = std::min(domain.b - y, y - domain.a);
  if (!(epsilon > 0.0) || !(epsilon < std::min(delta / 8.0, c / 2.0))) {
    throw DomainError("error_bound_general: epsilon must lie in (0, (delta/8) ^ (c/2))");
  }

  const TruncationQuantities q = model.truncation_quantities(epsilon);
  const double horizon = std::min(drift_horizon(q, std::min(delta / 2.0, c)),
                                  mode_horizon(model, q, delta / 2.0));
  if (!(t < horizon)) return kInfinity;

  const double lam = q.lambda_eps;
  const double a = q.a_eps;
  const double lt = lam * t;
  const double sigma = std::sqrt(q.sigma2_eps);

  const double first = phi_sup * std::exp(log_tail_bound(q, delta / 4.0, t) - lt) *
                       (8.0 / delta + 2.0 * a * t + a * lam * t * t);
  const double second = 2.0 * phi_sup * a * t * std::exp(log_tail_bound(q, c / 2.0, t) - lt) *
                        (1.0 + t * lam);
  const double third = phi_sup * lam * lam * a * t * t * t / 2.0;
  // 1 - exp(-x)(1 + x + x^2/2) is the regularised lower gamma P(3, x).
  const double fourth = phi_sup * a / lam * boost::math::gamma_p(3.0, lt);
  const double fifth = std::exp(-lt) * t * t *
                       (a * lam * phi_lip + 2.0 * phi_sup * a * a + phi_sup * lam * q.aprime_eps) *
                       (sigma * std::sqrt(t) + std::abs(q.mu_eps) / 2.0 * t);
  return (first + second + third + fourth + fifth) / model.marginal_density(t, y);
}

ExitEstimate exit_estimate(const LevyModel& model, const Domain& domain, double x, double y,
                           double t) {
  const ExitApproximation approx = p_tilde(model, domain, x, y, t);
  if (!domain.contains(x) || !domain.contains(y)) return {approx.p_tilde, 0.0, approx.p_raw};

  const Domain shifted = domain.translated(x);
  const double target = y - x;
  double bound = 0.0;
  if (shifted.a == -kInfinity && model.spec().kind == ModelKind::Cauchy) {
    bound = error_bound_cauchy(model, shifted.b, target, t);
  } else if (shifted.b == kInfinity && model.spec().kind == ModelKind::Cauchy) {
    // Reflect a lower barrier onto an upper one.
    bound = error_bound_cauchy(model, -shifted.a, -target, t);
  } else {
    const double c = std::min(shifted.b, -shifted.a);
    const double delta = std::min(shifted.b - target, target - shifted.a);
    // At the limit itself the tail terms are only O(t) and e_p / t would not
    // vanish, so stay strictly inside.
    bound = error_bound_general(model, shifted, target, t, 1.0, 0.0,
                                0.5 * std::min(delta / 8.0, c / 2.0));
  }
  return {approx.p_tilde, bound, approx.p_raw};
}

}  // namespace levymc
