#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levymc/error.hpp"
#include "levymc/validation.hpp"

using namespace levymc;

TEST_CASE("all suites pass") {
  ValidationOptions options;
  options.bridge_samples = 20000;
  const auto results = run_validation(options);
  CHECK(results.size() == 11);
  for (const CheckResult& r : results) {
    INFO(r.suite << ": " << r.name << " value " << r.value << " bound " << r.threshold);
    CHECK(r.passed);
  }
}

TEST_CASE("suite selection") {
  ValidationOptions options;
  options.only = {"envelope", "decay"};
  const auto results = run_validation(options);
  CHECK(results.size() == 3);
  for (const CheckResult& r : results) CHECK((r.suite == "envelope" || r.suite == "decay"));
  options.only = {"nonsense"};
  CHECK_THROWS_AS(run_validation(options), DomainError);
}

TEST_CASE("oracle accuracy") {
  const CauchyModel m(1.0);
  QuadratureConfig quad;
  quad.rel_tol = 1e-10;
  CHECK(convolution_oracle_error(m, quad) < 1e-8);
  CHECK(density_oracle_error(m, quad) < 1e-6);
  CHECK(envelope_grid_ratio(m, 1.0, 0.7) <= 1.0);
}

TEST_CASE("injected faults surface as numerical failures") {
  ValidationOptions options;
  options.only = {"convolution"};
  options.inject_fault = "quadrature";
  try {
    run_validation(options);
    FAIL("expected a failure");
  } catch (const NumericalFailure& e) {
    CHECK(e.component() == "quadrature");
  }
  options.only = {"bridge"};
  options.inject_fault = "bridge";
  try {
    run_validation(options);
    FAIL("expected a failure");
  } catch (const NumericalFailure& e) {
    CHECK(e.component() == "bridge");
  }
  options.inject_fault = "memory";
  CHECK_THROWS_AS(run_validation(options), DomainError);
}
