#pragma once

#include <limits>

#include "levymc/levy_model.hpp"

namespace levymc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Open interval (a, b) with a < 0 < b; a may be -inf or b +inf but not both.
struct Domain {
  double a = -kInfinity;
  double b = kInfinity;

  bool contains(double x) const { return x > a && x < b; }
  bool one_sided() const { return a == -kInfinity || b == kInfinity; }
  Domain translated(double x) const { return {a - x, b - x}; }
};

/// Throws DomainError unless a < 0 < b and at least one barrier is finite.
void validate(const Domain& domain);

/// First-order exit probability without its error bound.
struct ExitApproximation {
  double p_tilde = 1.0;  ///< clamp of p_raw to [0, 1]
  double p_raw = 1.0;
};

/// First-order exit probability together with its rigorous error bound.
struct ExitEstimate {
  double p_tilde = 1.0;
  double e_p = 0.0;
  double p_raw = 1.0;
};

/// Constants of the small-jump tail bound.
struct ErrorBoundConstants {
  double C_eta_eps = 0.0;
  double t0 = kInfinity;
  double t1 = kInfinity;
};

/// C(eta, eps) = (e sigma_eps^2 / (eps eta))^(eta / eps); may overflow to +inf.
double tail_constant(const TruncationQuantities& q, double eta);

/// log(C(eta, eps) * t^(eta / eps)), the tail bound in log space.
double log_tail_bound(const TruncationQuantities& q, double eta, double t);

/// t0(eps, eta) = eta / (2 (mu_eps v 0)), +inf without positive drift.
double drift_horizon(const TruncationQuantities& q, double eta);

/// t1(eps, eta): horizon below which the mode of the small-jump part stays
/// within eta; +inf for symmetric laws.
double mode_horizon(const LevyModel& model, const TruncationQuantities& q, double eta);

ErrorBoundConstants error_bound_constants(const LevyModel& model, double eta, double epsilon);

/// p~(x, y, t) for the bridge from x to y over a period t.
/// Returns 1 when either endpoint lies outside the domain.
ExitApproximation p_tilde(const LevyModel& model, const Domain& domain, double x, double y,
                          double t);

/// Individual error terms of the one-sided Cauchy bound at start 0 with
/// upper barrier b. Each term is an absolute (unconditional) bound; e_p is
/// their sum divided by f_t(y).
struct CauchyErrorTerms {
  double epsilon = 0.0;
  double epsilon0 = 0.0;
  double no_jump = 0.0;        // e(0)
  double one_jump_1 = 0.0;     // e(1,1)
  double one_jump_2 = 0.0;     // e(1,2)
  double two_jumps_1 = 0.0;    // e(2,1)
  double two_jumps_2 = 0.0;    // e(2,2)
  double two_jumps_3 = 0.0;    // e(2,3)
  double many_jumps = 0.0;     // e(3)
  double killing_factor = 0.0; // (1 - exp(-lambda t)) * t^2/2 * C(b, y)
  double density = 0.0;        // f_t(y)

  double sum() const {
    return no_jump + one_jump_1 + one_jump_2 + two_jumps_1 + two_jumps_2 + two_jumps_3 +
           many_jumps + killing_factor;
  }
};

/// Jump-size cutoffs of the Cauchy bound. Any pair with
/// 0 < epsilon <= (b-y)/8 ^ b/2 and 0 < epsilon0 < (b-y-epsilon)/2 ^ (b-epsilon)
/// gives a valid bound.
struct CauchyCutoffs {
  double epsilon = 0.0;
  double epsilon0 = 0.0;
};

/// epsilon = (b-y)/8 ^ b/2, epsilon0 = (b-y)/4 ^ b/2, pulled to 0.99 of its
/// admissible limit when that binds.
CauchyCutoffs default_cauchy_cutoffs(double b, double y);

CauchyErrorTerms cauchy_error_terms(const LevyModel& model, double b, double y, double t);
CauchyErrorTerms cauchy_error_terms(const LevyModel& model, double b, double y, double t,
                                    CauchyCutoffs cutoffs);

inline constexpr int kCauchyCutoffRungs = 4;

/// e_p(0, y, t) for the Cauchy process on (-inf, b): the bound descending the
/// ladder of cutoffs (eps / 4^k, eps0 / 4^(k-1)), k < kCauchyCutoffRungs, starting
/// from the defaults, until a rung stops improving. Small cutoffs win when t is tiny against b and b - y.
/// Returns 0 for y >= b.
double error_bound_cauchy(const LevyModel& model, double b, double y, double t);

/// e_R(0, y, t) / f_t(y) from the general remainder bound; phi_sup and
/// phi_lip are the sup and Lipschitz norms of the overshoot functional.
/// Returns +inf when t is beyond the validity horizon of the bound.
double error_bound_general(const LevyModel& model, const Domain& domain, double y, double t,
                           double phi_sup, double phi_lip, double epsilon);

/// p~ and e_p for the bridge from x to y over a period t.
ExitEstimate exit_estimate(const LevyModel& model, const Domain& domain, double x, double y,
                           double t);

}  // namespace levymc
