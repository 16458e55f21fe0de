#pragma once

#include <functional>

#include "levymc/levy_model.hpp"

namespace levymc {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  int max_subdivisions = 1 << 16;
};

/// Throws DomainError unless rel_tol >= 1e-14, abs_tol > 0 and
/// 1 <= max_subdivisions <= 1e6.
void validate(const QuadratureConfig& cfg);

using RealFunction = std::function<double(double)>;

/// Integral of f over (lower, +inf). The half line is mapped onto (0, 1)
/// by v = lower + u / (1 - u) and integrated with adaptive Gauss-Kronrod
/// (7/15-point nested pair). Throws NumericalFailure when the estimated error
/// exceeds max(abs_tol, rel_tol * |value|).
double tail_quadrature(const RealFunction& f, double lower, const QuadratureConfig& cfg = {});

/// Integral of f over [lower, upper] with the same rule and failure contract.
double finite_quadrature(const RealFunction& f, double lower, double upper,
                         const QuadratureConfig& cfg = {});

/// Integral of f over the whole line, split at `split`.
double line_quadrature(const RealFunction& f, double split, const QuadratureConfig& cfg = {});

/// C(b, y) = integral over v > b of s(v) s(y - v), for b > 0 and y < b.
double incomplete_convolution(const LevyModel& model, double b, double y);

/// Cauchy closed forms of C(b, y). Exposed so both branches can be checked
/// against each other.
double cauchy_convolution_series(double c, double b, double y);
double cauchy_convolution_closed(double c, double b, double y);

/// f_t(x) = (1/pi) * integral over u > 0 of cos(u x) exp(t psi(u)).
/// Validation only.
double density_inversion_oracle(const LevyModel& model, double t, double x,
                                const QuadratureConfig& cfg = {});

}  // namespace levymc
