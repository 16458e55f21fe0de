#include "levymc/levy_model.hpp"

#include <cmath>
#include <numbers>

#include "levymc/error.hpp"

namespace levymc {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Cauchy:
      return "cauchy";
  }
  return "unknown";
}

CauchyModel::CauchyModel(double c) : spec_{ModelKind::Cauchy, c} {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("cauchy: intensity c must be positive and finite");
  }
}

double CauchyModel::scale(double t) const { return std::numbers::pi * spec_.c * t; }

double CauchyModel::levy_density(double x) const {
  if (x == 0.0) throw DomainError("levy_density: singular at x = 0");
  return spec_.c / (x * x);
}

double CauchyModel::levy_density_slope(double x) const {
  if (x == 0.0) throw DomainError("levy_density_slope: singular at x = 0");
  const double ax = std::abs(x);
  return 2.0 * spec_.c / (ax * ax * ax);
}

double CauchyModel::marginal_density(double t, double x) const {
  if (!(t > 0.0)) throw DomainError("marginal_density: t must be positive");
  const double g = scale(t);
  return g / (std::numbers::pi * (g * g + x * x));
}

double CauchyModel::marginal_cdf(double t, double x) const {
  if (!(t > 0.0)) throw DomainError("marginal_cdf: t must be positive");
  return 0.5 + std::atan(x / scale(t)) / std::numbers::pi;
}

double CauchyModel::sample_increment(double t, RandomStream& rng) const {
  if (!(t > 0.0)) throw DomainError("sample_increment: t must be positive");
  const double u = rng.uniform_open();
  return scale(t) * std::tan(std::numbers::pi * (u - 0.5));
}

TruncationQuantities CauchyModel::truncation_quantities(double epsilon) const {
  if (!(epsilon > 0.0)) throw DomainError("truncation_quantities: epsilon must be positive");
  const double c = spec_.c;
  TruncationQuantities q;
  q.epsilon = epsilon;
  q.lambda_eps = 2.0 * c / epsilon;
  q.a_eps = c / (epsilon * epsilon);
  q.aprime_eps = 2.0 * c / (epsilon * epsilon * epsilon);
  q.sigma2_eps = 2.0 * c * epsilon;
  q.mu_eps = 0.0;
  return q;
}

double CauchyModel::characteristic_exponent(double u) const {
  return -std::numbers::pi * spec_.c * std::abs(u);
}

std::unique_ptr<LevyModel> make_model(const LevyModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::Cauchy:
      return std::make_unique<CauchyModel>(spec.c);
  }
  throw DomainError("make_model: unsupported model kind");
}

double levy_density(const LevyModel& model, double x) { return model.levy_density(x); }

double marginal_density(const LevyModel& model, double t, double x) {
  return model.marginal_density(t, x);
}

double sample_increment(const LevyModel& model, double t, RandomStream& rng) {
  return model.sample_increment(t, rng);
}

TruncationQuantities truncation_quantities(const LevyModel& model, double epsilon) {
  return model.truncation_quantities(epsilon);
}

double characteristic_exponent(const LevyModel& model, double u) {
  return model.characteristic_exponent(u);
}

}  // namespace levymc
