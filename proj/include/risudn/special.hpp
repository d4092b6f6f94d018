#pragma once

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "risudn/common.hpp"

namespace risudn {

/// Upper incomplete gamma function Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt.
inline double upper_incomplete_gamma(double a, double x) {
  require(a > 0.0, "upper_incomplete_gamma: shape must be positive");
  require(x >= 0.0, "upper_incomplete_gamma: lower limit must be non-negative");
  if (x == 0.0) return boost::math::tgamma(a);
  return boost::math::tgamma(a, x);
}

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double regularized_upper_gamma(double a, double x) {
  require(a > 0.0 && x >= 0.0, "regularized_upper_gamma: invalid domain");
  return boost::math::gamma_q(a, x);
}

inline double gamma_fn(double a) { return boost::math::tgamma(a); }

/// B(2, a-2) = int_0^inf x (1+x)^-a dx, finite for a > 2 (1/6 at a = 4).
inline double path_loss_beta(double a) {
  require(a > 2.0, "path_loss_beta: exponent must exceed 2");
  return boost::math::beta(2.0, a - 2.0);
}

}  // namespace risudn
