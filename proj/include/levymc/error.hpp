#pragma once

#include <stdexcept>
#include <string>

namespace levymc {

/// Thrown when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure could not deliver a trustworthy value
/// (quadrature did not converge, rejection sampler hit its cap, ...).
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(std::string component, const std::string& what)
      : std::runtime_error(component + ": " + what), component_(std::move(component)) {}

  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

}  // namespace levymc
