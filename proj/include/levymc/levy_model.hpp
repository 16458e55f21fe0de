#pragma once

#include <memory>
#include <string>

#include "levymc/rng.hpp"

namespace levymc {

enum class ModelKind { Cauchy };

std::string to_string(ModelKind kind);

/// Parameters of the driving Lévy process. For the Cauchy process the Lévy
/// density is s(x) = c / x^2.
struct LevyModelSpec {
  ModelKind kind = ModelKind::Cauchy;
  double c = 1.0;
};

/// Scalars of the Lévy density split at jump size epsilon with the sharp
/// cutoff 1{|x| > epsilon}.
struct TruncationQuantities {
  double epsilon = 0.0;
  double lambda_eps = 0.0;  ///< intensity of jumps larger than epsilon
  double a_eps = 0.0;       ///< sup of the truncated Lévy density
  double aprime_eps = 0.0;  ///< sup of |s'| over |x| > epsilon
  double sigma2_eps = 0.0;  ///< variance rate of the small-jump part (incl. Gaussian part)
  double mu_eps = 0.0;      ///< drift of the small-jump part
};

/// Analytic capabilities of a Lévy process with strictly positive,
/// unimodal marginal densities.
class LevyModel {
 public:
  virtual ~LevyModel() = default;

  virtual const LevyModelSpec& spec() const = 0;

  /// Lévy density s(x), x != 0.
  virtual double levy_density(double x) const = 0;
  /// |s'(x)|, x != 0.
  virtual double levy_density_slope(double x) const = 0;
  /// Density f_t(x) of X_t.
  virtual double marginal_density(double t, double x) const = 0;
  /// Distribution function of X_t.
  virtual double marginal_cdf(double t, double x) const = 0;
  /// Draws a variate distributed as X_t.
  virtual double sample_increment(double t, RandomStream& rng) const = 0;
  virtual TruncationQuantities truncation_quantities(double epsilon) const = 0;
  /// psi(u) with E[exp(i u X_t)] = exp(t psi(u)); real-valued for the
  /// symmetric models shipped here.
  virtual double characteristic_exponent(double u) const = 0;
  /// True when the law of X_t is symmetric about zero.
  virtual bool symmetric() const = 0;
};

/// Symmetric Cauchy process: f_t is the Cauchy density with scale pi*c*t.
class CauchyModel final : public LevyModel {
 public:
  explicit CauchyModel(double c);

  const LevyModelSpec& spec() const override { return spec_; }
  double intensity() const { return spec_.c; }
  /// Scale pi*c*t of X_t.
  double scale(double t) const;

  double levy_density(double x) const override;
  double levy_density_slope(double x) const override;
  double marginal_density(double t, double x) const override;
  double marginal_cdf(double t, double x) const override;
  double sample_increment(double t, RandomStream& rng) const override;
  TruncationQuantities truncation_quantities(double epsilon) const override;
  double characteristic_exponent(double u) const override;
  bool symmetric() const override { return true; }

 private:
  LevyModelSpec spec_;
};

/// Validates the spec and builds the matching model.
std::unique_ptr<LevyModel> make_model(const LevyModelSpec& spec);

// Free-function forms of the model operations.
double levy_density(const LevyModel& model, double x);
double marginal_density(const LevyModel& model, double t, double x);
double sample_increment(const LevyModel& model, double t, RandomStream& rng);
TruncationQuantities truncation_quantities(const LevyModel& model, double epsilon);
double characteristic_exponent(const LevyModel& model, double u);

}  // namespace levymc
