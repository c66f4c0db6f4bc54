#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hyperis/symbolic/polynomial.hpp"

namespace hyperis::sym {

/// Failure of the extra-sample consistency check.
class InterpolationError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

struct Sample {
  Rat at;
  Poly value;  // may depend on other variables (e.g. λ); must not depend on `var`
};

/// Lagrange interpolation in `var` through the first degree_bound+1 samples.
/// Every remaining sample must be reproduced exactly, otherwise InterpolationError.
inline Poly interpolate_poly(const std::vector<Sample>& samples, unsigned degree_bound, Var var = Var::d) {
  require(samples.size() >= degree_bound + 2,
          "interpolate_poly needs at least degree_bound + 2 samples (one for verification)");
  const std::size_t n = degree_bound + 1;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(!samples[i].value.depends_on(var), "sample values must not depend on the interpolation variable");
    for (std::size_t j = 0; j < i; ++j) require(samples[i].at != samples[j].at, "duplicate interpolation nodes");
  }
  const Poly x = Poly::var(var);
  Poly result;
  for (std::size_t i = 0; i < n; ++i) {
    Poly basis(1);
    Rat denom = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      basis *= (x - Poly(samples[j].at));
      denom *= samples[i].at - samples[j].at;
    }
    result += samples[i].value * basis * (Rat(1) / denom);
  }
  for (std::size_t i = n; i < samples.size(); ++i) {
    Poly at = result.substitute(var, samples[i].at);
    if (!(at == samples[i].value))
      throw InterpolationError("interpolation check failed at " + std::string(var_name(var)) + " = " +
                               hyperis::to_string(samples[i].at) + ": expected " + samples[i].value.to_string() +
                               ", interpolant gives " + at.to_string());
  }
  return result;
}

}  // namespace hyperis::sym
