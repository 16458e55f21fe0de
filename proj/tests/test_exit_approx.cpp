#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levymc/error.hpp"
#include "levymc/exit_approx.hpp"
#include "levymc/numerics.hpp"

using namespace levymc;
using doctest::Approx;

namespace {

const Domain kUpper{-kInfinity, 1.0};

// Cauchy density with a positive small-jump drift, so the validity horizons
// of the general bound are finite.
class DriftedCauchy final : public LevyModel {
 public:
  const LevyModelSpec& spec() const override { return base_.spec(); }
  double levy_density(double x) const override { return base_.levy_density(x); }
  double levy_density_slope(double x) const override { return base_.levy_density_slope(x); }
  double marginal_density(double t, double x) const override { return base_.marginal_density(t, x); }
  double marginal_cdf(double t, double x) const override { return base_.marginal_cdf(t, x); }
  double sample_increment(double t, RandomStream& rng) const override {
    return base_.sample_increment(t, rng);
  }
  TruncationQuantities truncation_quantities(double epsilon) const override {
    auto q = base_.truncation_quantities(epsilon);
    q.mu_eps = 1.0;
    return q;
  }
  double characteristic_exponent(double u) const override { return base_.characteristic_exponent(u); }
  bool symmetric() const override { return false; }

 private:
  CauchyModel base_{1.0};
};

}  // namespace

TEST_CASE("p_tilde") {
  CauchyModel m(1.0);
  CHECK(p_tilde(m, kUpper, 0.0, 1.2, 0.1).p_tilde == 1.0);
  CHECK(p_tilde(m, kUpper, 1.5, 0.0, 0.1).p_tilde == 1.0);
  // Golden from tests/oracles/cauchy_oracle.py.
  const ExitApproximation p = p_tilde(m, kUpper, 0.0, 0.5, 0.01);
  CHECK(p.p_raw == Approx(0.001141545307496773031).epsilon(1e-12));
  CHECK(p.p_tilde == p.p_raw);
  const double by_oracles = 0.5 * 1e-4 *
                            tail_quadrature([&](double v) { return m.levy_density(v) * m.levy_density(0.5 - v); }, 1.0) /
                            density_inversion_oracle(m, 0.01, 0.5);
  CHECK(p.p_raw == Approx(by_oracles).epsilon(1e-8));
  // Translation invariance.
  CHECK(p_tilde(m, {-kInfinity, 3.0}, 2.0, 2.5, 0.01).p_raw == Approx(p.p_raw).epsilon(1e-12));
  // A lower barrier is the mirror image of an upper one.
  CHECK(p_tilde(m, {-1.0, kInfinity}, 0.0, -0.5, 0.01).p_raw == Approx(p.p_raw).epsilon(1e-12));
  // Two barriers add.
  const double both = p_tilde(m, {-1.0, 1.0}, 0.0, 0.5, 0.01).p_raw;
  const double lower = p_tilde(m, {-1.0, kInfinity}, 0.0, 0.5, 0.01).p_raw;
  CHECK(both == Approx(p.p_raw + lower).epsilon(1e-12));
  // p is Theta(t): p/t settles as t -> 0.
  double prev = 1.0;
  for (int k = 4; k < 30; k += 5) {
    const double t = std::ldexp(1.0, -k);
    const double ratio = p_tilde(m, kUpper, 0.0, 0.5, t).p_raw / t;
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK(p_tilde(m, kUpper, 0.0, 0.5, 1e-12).p_raw < 1e-9);
  CHECK(p_tilde(m, kUpper, 0.0, 0.9, 1000.0).p_tilde == 1.0);
  CHECK_THROWS_AS(p_tilde(m, kUpper, 0.0, 0.5, 0.0), DomainError);
}

TEST_CASE("Cauchy error bound goldens") {
  CauchyModel m(1.0);
  // Second transcription in tests/oracles/cauchy_oracle.py.
  const CauchyErrorTerms terms = cauchy_error_terms(m, 1.0, 0.5, 0.01);
  CHECK(terms.epsilon == Approx(1.0 / 16.0));
  CHECK(terms.epsilon0 == Approx(0.125));
  CHECK(terms.sum() / terms.density == Approx(6.7090660708452143729).epsilon(1e-10));
  CHECK(error_bound_cauchy(m, 1.0, 0.5, 0.01) == Approx(3.8373792556714165779).epsilon(1e-10));
  CHECK(error_bound_cauchy(m, 1.0, 0.25, 0.02) == Approx(1.789009828519754241).epsilon(1e-10));
  CHECK(error_bound_cauchy(m, 1.0, 0.25, 0.01) == Approx(0.11982038351514353068).epsilon(1e-10));
  // Large jump in a tiny interval close to the barrier: the smaller cutoffs
  // cut the default bound by two orders of magnitude.
  CHECK(error_bound_cauchy(m, 0.005, -0.6, 1e-9) == Approx(2.8736486987983094197e-9).epsilon(1e-9));
  const CauchyErrorTerms jump = cauchy_error_terms(m, 0.005, -0.6, 1e-9);
  CHECK(jump.sum() / jump.density == Approx(3.0003736421341462166e-7).epsilon(1e-9));
  CHECK(error_bound_cauchy(m, 1.0, 1.0, 0.01) == 0.0);
  CHECK(error_bound_cauchy(m, 1.0, 2.0, 0.01) == 0.0);
}

TEST_CASE("Cauchy error bound properties") {
  CauchyModel m(1.0);
  for (double y : {-3.0, -0.2, 0.0, 0.5, 0.9, 0.999}) {
    for (double t : {1.0, 0.1, 1e-3, 1e-8}) {
      const double e = error_bound_cauchy(m, 1.0, y, t);
      CHECK(e >= 0.0);
      // The many-jump term overflows for y near b at large t; the bound is then vacuous.
      CHECK(!std::isnan(e));
      if (t <= 1e-3 || y <= 0.5) CHECK(std::isfinite(e));
      CHECK(e <= error_bound_cauchy(m, 1.0, y, t) * (1.0 + 1e-15));
      const CauchyErrorTerms terms = cauchy_error_terms(m, 1.0, y, t);
      CHECK(e <= terms.sum() / terms.density * (1.0 + 1e-12));
    }
  }
  // e_p / t decreases monotonically along t = 2^-k.
  double prev = kInfinity;
  for (int k = 4; k <= 40; ++k) {
    const double t = std::ldexp(1.0, -k);
    const double ratio = error_bound_cauchy(m, 1.0, 0.5, t) / t;
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK(prev < 1e-6);
  CHECK_THROWS_AS(cauchy_error_terms(m, 1.0, 0.5, 0.01, {0.1, 0.1}), DomainError);
  CHECK_THROWS_AS(cauchy_error_terms(m, 1.0, 0.5, 0.01, {0.01, 0.3}), DomainError);
  CHECK_NOTHROW(cauchy_error_terms(m, 1.0, 0.5, 0.01, {0.01, 0.2}));
  CHECK_THROWS_AS(error_bound_cauchy(m, 1.0, 0.5, 0.0), DomainError);
}

TEST_CASE("general error bound") {
  CauchyModel m(1.0);
  const Domain sym{-1.0, 1.0};
  const double e = error_bound_general(m, sym, 0.0, 0.01, 1.0, 0.0, 1.0 / 16.0);
  CHECK(e == Approx(0.11820398821734964443).epsilon(1e-10));
  CHECK(error_bound_general(m, sym, 0.0, 0.01, 1.0, 2.0, 1.0 / 16.0) > e);
  CHECK(error_bound_general(m, sym, 0.0, 0.01, 2.0, 0.0, 1.0 / 16.0) == Approx(2.0 * e));
  CHECK_THROWS_AS(error_bound_general(m, sym, 0.0, 0.01, 1.0, 0.0, 0.125), DomainError);
  CHECK_THROWS_AS(error_bound_general(m, sym, 0.0, 0.01, 1.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(error_bound_general(m, sym, 1.5, 0.01, 1.0, 0.0, 0.01), DomainError);
  CHECK_THROWS_AS(error_bound_general(m, sym, 0.0, 0.01, -1.0, 0.0, 0.01), DomainError);

  DriftedCauchy drifted;
  const auto q = drifted.truncation_quantities(1.0 / 16.0);
  CHECK(drift_horizon(q, 0.5) == Approx(0.25));
  CHECK(std::isfinite(mode_horizon(drifted, q, 0.5)));
  CHECK(std::isfinite(error_bound_general(drifted, sym, 0.0, 1e-4, 1.0, 0.0, 1.0 / 16.0)));
  CHECK(error_bound_general(drifted, sym, 0.0, 0.3, 1.0, 0.0, 1.0 / 16.0) == kInfinity);
}

TEST_CASE("tail constants") {
  CauchyModel m(1.0);
  const auto q = m.truncation_quantities(0.1);
  CHECK(tail_constant(q, 0.5) == Approx(std::pow(2.0 * std::exp(1.0) / 0.5, 5.0)).epsilon(1e-12));
  CHECK(log_tail_bound(q, 0.5, 0.01) == Approx(std::log(tail_constant(q, 0.5) * std::pow(0.01, 5.0))));
  const auto k = error_bound_constants(m, 0.5, 0.1);
  CHECK(k.t0 == kInfinity);
  CHECK(k.t1 == kInfinity);
}

TEST_CASE("exit estimate dispatch") {
  CauchyModel m(1.0);
  const ExitEstimate out = exit_estimate(m, kUpper, 1.5, 0.0, 0.1);
  CHECK(out.p_tilde == 1.0);
  CHECK(out.e_p == 0.0);
  CHECK(exit_estimate(m, kUpper, 0.0, 1.5, 0.1).e_p == 0.0);
  const ExitEstimate in = exit_estimate(m, kUpper, 0.0, 0.25, 0.001);
  CHECK(in.p_tilde > 0.0);
  CHECK(in.p_tilde < 1.0);
  CHECK(in.e_p > 0.0);
  CHECK(in.e_p == Approx(error_bound_cauchy(m, 1.0, 0.25, 0.001)));
  CHECK(exit_estimate(m, {-kInfinity, 3.0}, 2.0, 2.25, 0.001).e_p == Approx(in.e_p).epsilon(1e-12));
  CHECK(exit_estimate(m, {-1.0, kInfinity}, 0.0, -0.25, 0.001).e_p == Approx(in.e_p).epsilon(1e-12));
  const ExitEstimate two = exit_estimate(m, {-1.0, 1.0}, 0.0, 0.1, 0.001);
  CHECK(two.e_p > 0.0);
  CHECK(std::isfinite(two.e_p));
  CHECK_THROWS_AS(validate(Domain{-kInfinity, kInfinity}), DomainError);
  CHECK_THROWS_AS(validate(Domain{0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(validate(Domain{-1.0, 0.0}), DomainError);
}
