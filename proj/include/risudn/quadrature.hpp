#pragma once

// Fixed-order Gauss-Legendre rules for the nested integrals, plus thin
// wrappers over Boost's adaptive Gauss-Kronrod for one-dimensional ones.

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "risudn/common.hpp"

namespace risudn {

struct Rule {
  std::vector<double> x;  // nodes on [0, 1]
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule mapped to [0, 1].
inline Rule gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: need at least one node");
  Rule r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    r.x[lo] = 0.5 * (1.0 - z);
    r.x[hi] = 0.5 * (1.0 + z);
    r.w[lo] = r.w[hi] = 0.5 * w;
  }
  return r;
}

/// Integral of f over [0, u_max] in the variable u, with x = c u / (1 - u).
/// Covers [0, c u_max / (1 - u_max)]; u_max = 1 gives the half line.
template <class F>
double integrate_mapped(const Rule& rule, double c, double u_max, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double u = u_max * rule.x[i];
    const double one_minus = 1.0 - u;
    const double x = c * u / one_minus;
    acc += rule.w[i] * f(x) * c / (one_minus * one_minus);
  }
  return acc * u_max;
}

/// Half line [a, inf) through the same map shifted by a.
template <class F>
double integrate_tail(const Rule& rule, double a, double c, F&& f) {
  return integrate_mapped(rule, c, 1.0, [&](double t) { return f(a + t); });
}

template <class F>
double integrate_interval(const Rule& rule, double a, double b, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * f(a + (b - a) * rule.x[i]);
  return acc * (b - a);
}

/// Adaptive Gauss-Kronrod on [a, b]; b may be +inf. Throws on a non-finite result.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol, unsigned max_depth,
                          double* error = nullptr) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err);
  if (!std::isfinite(v)) throw DivergenceError("integrate_adaptive: non-finite integral");
  if (error) *error = err;
  return v;
}

}  // namespace risudn
