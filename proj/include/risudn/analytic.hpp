#pragma once

// Numerical evaluation of the ternary stochastic-geometry expressions:
// integral functionals, Campbell/PGFL over paired processes, signal and
// interference moments, coverage, ASE, AEE and ECE.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>
#include <algorithm>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "risudn/channel.hpp"
#include "risudn/geometry.hpp"
#include "risudn/power.hpp"
#include "risudn/ppp.hpp"
#include "risudn/quadrature.hpp"
#include "risudn/special.hpp"

namespace risudn {

struct QuadratureConfig {
  double r_max = 0.0;  // 0: improper integrals run to infinity
  double rel_tol = 1e-8;
  unsigned max_depth = 15;
  int z_grid = 48;            // MGF variable nodes
  int distance_nodes = 40;    // serving distance
  int interferer_nodes = 32;  // interfering BS distance
  int radial_nodes = 40;      // RIS distance, per half plane
  int angle_nodes = 12;       // RIS angle, per quarter turn

  void validate() const {
    require(r_max >= 0.0, "QuadratureConfig: r_max must be non-negative");
    require(rel_tol > 0.0 && rel_tol < 1.0, "QuadratureConfig: rel_tol must lie in (0, 1)");
    require(max_depth >= 1, "QuadratureConfig: max_depth must be positive");
    require(z_grid >= 8 && distance_nodes >= 4 && interferer_nodes >= 4 && radial_nodes >= 4 &&
                angle_nodes >= 2,
            "QuadratureConfig: too few nodes");
  }
  double upper() const { return r_max > 0.0 ? r_max : std::numeric_limits<double>::infinity(); }
};

enum class QKind { one, p, one_minus_p };

/// Reflection weight inside the RIS-plane integrals.
///  triangle: (pi - dtheta_M)/(2 pi) with dtheta_M the RIS vertex angle of the triangle.
///  bs_angle: (pi - psi)/(2 pi) with psi the angle at the BS vertex.
enum class ReflectionWeight { triangle, bs_angle };

/// Constant multiplying delta in the coverage exponent.
///  matched: shape (shape!)^(-1/shape), exact for Rayleigh signal power.
///  varpi:   min{1, ((1+shape)!)^(-1/(shape+1))} * shape/(1+shape).
enum class CoverageKernel { matched, varpi };

struct AnalyticModel {
  CellCoefficient cell = CellCoefficient::exact;
  ReflectionWeight weight = ReflectionWeight::triangle;
  CoverageKernel kernel = CoverageKernel::matched;
  bool single_cross_term = false;  // drop the factor 2 on the direct x served-RIS term
};

inline double varpi(int shape) {
  require(shape >= 1, "varpi: shape must be a positive integer");
  const double s = static_cast<double>(shape);
  const double f = boost::math::factorial<double>(static_cast<unsigned>(shape + 1));
  return std::min(1.0, std::pow(f, -1.0 / (s + 1.0))) * s / (1.0 + s);
}

inline double matched_kernel(int shape) {
  require(shape >= 1, "matched_kernel: shape must be a positive integer");
  const double s = static_cast<double>(shape);
  return s * std::pow(boost::math::factorial<double>(static_cast<unsigned>(shape)), -1.0 / s);
}

struct CoverageParams {
  FadingSpec fading{};
  double lambda_active = 0.01;
  double lambda_m = 0.0;
  double delta = 1.0;  // linear threshold
  PowerModel power{};
  AnalyticModel model{};

  double varpi() const { return risudn::varpi(fading.shape); }
  double kernel() const {
    return model.kernel == CoverageKernel::varpi ? varpi() : matched_kernel(fading.shape);
  }
  void validate() const {
    if (fading.alpha <= 2.0) throw DivergenceError("CoverageParams: path-loss exponent must exceed 2");
    fading.validate();
    power.validate();
    require(lambda_active > 0.0, "CoverageParams: active intensity must be positive");
    require(lambda_m >= 0.0, "CoverageParams: RIS intensity must be non-negative");
    require(delta > 0.0, "CoverageParams: threshold must be positive");
  }
};

// ---------------------------------------------------------------------------
// One-dimensional functionals

/// F(a, k) = int_0^inf x (1+x)^-a exp(-k x^2) dx.
inline double func_F(double a, double k, const QuadratureConfig& q = {}) {
  require(k >= 0.0, "func_F: rate must be non-negative");
  if (a <= 2.0 && k == 0.0) throw DivergenceError("func_F: integral diverges for a <= 2 at k = 0");
  if (k == 0.0) return path_loss_beta(a);
  return integrate_adaptive([&](double x) { return x * std::pow(1.0 + x, -a) * std::exp(-k * x * x); }, 0.0,
                            q.upper(), q.rel_tol, q.max_depth);
}

/// G(f) = int_0^pi (pi - t)/(2 pi) * f(t) / pi dt.
template <class F>
double func_G(F&& integrand, const QuadratureConfig& q = {}) {
  return integrate_adaptive(
      [&](double t) { return reflection_prob_given_angle(t) * integrand(t) / kPi; }, 0.0, kPi, q.rel_tol,
      q.max_depth);
}

// ---------------------------------------------------------------------------
// Integrals over the RIS plane for a BS at distance d from the UE.

namespace detail {

struct PlanePoint {
  double d_incident;  // BS-RIS
  double d_reflect;   // RIS-UE
  double cos_ris;     // cosine of the RIS vertex angle
  double cos_bs;      // cosine of the BS vertex angle
};

inline double reflection_weight(const PlanePoint& p, ReflectionWeight w) {
  const double c = w == ReflectionWeight::triangle ? p.cos_ris : p.cos_bs;
  return (kPi - std::acos(std::clamp(c, -1.0, 1.0))) / kTwoPi;
}

struct PlaneRules {
  Rule radial;
  Rule angle;
  explicit PlaneRules(const QuadratureConfig& q)
      : radial(gauss_legendre(q.radial_nodes)), angle(gauss_legendre(q.angle_nodes)) {}
};

/// int over R^2 of g(point) for the RIS position. The plane is cut along the
/// BS-UE bisector; each half is integrated in polar coordinates around its own
/// vertex so both path-loss peaks sit at a radial origin.
template <std::size_t N, class G>
std::array<double, N> plane_integral(double d, const PlaneRules& rules, G&& g) {
  constexpr double c = 1.0;
  std::array<double, N> total{};
  for (int side = 0; side < 2; ++side) {
    const bool bs_side = side == 0;
    for (int quarter = 0; quarter < 2; ++quarter) {
      for (std::size_t ia = 0; ia < rules.angle.x.size(); ++ia) {
        const double phi = 0.5 * kPi * (quarter + rules.angle.x[ia]);
        const double wa = 0.5 * kPi * rules.angle.w[ia];
        const double cphi = std::cos(phi);
        double u_max = 1.0;
        if (cphi > 0.0) {
          const double r_edge = 0.5 * d / cphi;
          u_max = r_edge / (c + r_edge);
        }
        if (u_max <= 0.0) continue;
        for (std::size_t ir = 0; ir < rules.radial.x.size(); ++ir) {
          const double u = u_max * rules.radial.x[ir];
          const double om = 1.0 - u;
          const double r = c * u / om;
          const double wr = u_max * rules.radial.w[ir] * c / (om * om);
          const double other = std::sqrt(std::max(0.0, r * r + d * d - 2.0 * r * d * cphi));
          PlanePoint p{};
          p.d_incident = bs_side ? r : other;
          p.d_reflect = bs_side ? other : r;
          const double di = p.d_incident, dr = p.d_reflect;
          p.cos_ris = di * dr > 0.0 ? (di * di + dr * dr - d * d) / (2.0 * di * dr) : 1.0;
          if (bs_side)
            p.cos_bs = cphi;
          else
            p.cos_bs = di * d > 0.0 ? (di * di + d * d - dr * dr) / (2.0 * di * d) : 1.0;
          const std::array<double, N> v = g(p);
          const double w = 2.0 * wa * wr * r;  // 2: mirror image across the BS-UE axis
          for (std::size_t k = 0; k < N; ++k) total[k] += w * v[k];
        }
      }
    }
  }
  return total;
}

inline double pl_power(double dist, double exponent) {
  const double x = 1.0 + dist;
  if (exponent == 4.0) {
    const double x2 = x * x;
    return 1.0 / (x2 * x2);
  }
  if (exponent == 2.0) return 1.0 / (x * x);
  return std::pow(x, -exponent);
}

inline double kind_weight(QKind kind, double p_cell) {
  switch (kind) {
    case QKind::one: return 1.0;
    case QKind::p: return p_cell;
    case QKind::one_minus_p: return 1.0 - p_cell;
  }
  return 1.0;
}

}  // namespace detail

/// Q_kind(exponent, d_D) = (1/2pi) int_{R^2} w(d_I) P(beta=1) (1+d_I)^-e (1+d_R)^-e dA,
/// with w = 1, p(lambda', d_I) or 1 - p; so that lambda_m * int = 2 pi lambda_m Q.
inline double func_Q(QKind kind, double exponent, double d_D, double lambda_active,
                     const QuadratureConfig& q = {}, const AnalyticModel& model = {}) {
  if (exponent <= 1.0) throw DivergenceError("func_Q: plane integral diverges for exponent <= 1");
  require(d_D >= 0.0, "func_Q: distance must be non-negative");
  require(lambda_active > 0.0, "func_Q: active intensity must be positive");
  q.validate();
  const detail::PlaneRules rules(q);
  const auto v = detail::plane_integral<1>(d_D, rules, [&](const detail::PlanePoint& p) {
    const double cell =
        kind == QKind::one ? 1.0 : ris_in_cell_probability(lambda_active, p.d_incident, model.cell);
    return std::array<double, 1>{detail::kind_weight(kind, cell) * detail::reflection_weight(p, model.weight) *
                                 detail::pl_power(p.d_incident, exponent) *
                                 detail::pl_power(p.d_reflect, exponent)};
  });
  return v[0] / kTwoPi;
}

// ---------------------------------------------------------------------------
// Paired point processes

/// 4 pi^2 lambda_n lambda_m int int f(x, y) x y dx dy over the positive quadrant.
template <class F>
double ternary_campbell(F&& f, double lambda_n, double lambda_m, const QuadratureConfig& q = {}) {
  require(lambda_n >= 0.0 && lambda_m >= 0.0, "ternary_campbell: intensities must be non-negative");
  if (lambda_n == 0.0 || lambda_m == 0.0) return 0.0;
  const double hi = q.upper();
  const double inner_tol = q.rel_tol * 0.1;
  const double v = integrate_adaptive(
      [&](double x) {
        if (x == 0.0) return 0.0;
        return x * integrate_adaptive([&](double y) { return f(x, y) * y; }, 0.0, hi, inner_tol, q.max_depth);
      },
      0.0, hi, q.rel_tol, q.max_depth);
  return 4.0 * kPi * kPi * lambda_n * lambda_m * v;
}

struct PgflApprox {
  double approx = 1.0;  // exp(-4 pi^2 ln lm int int (1 - f) x y)
  double nested = 1.0;  // exp(-2 pi lm int (1 - exp(-2 pi ln int (1 - f) x dx)) y dy)
};

template <class F>
PgflApprox ternary_pgfl_approx(F&& f, double lambda_n, double lambda_m, const QuadratureConfig& q = {}) {
  require(lambda_n >= 0.0 && lambda_m >= 0.0, "ternary_pgfl_approx: intensities must be non-negative");
  const double hi = q.upper();
  const double inner_tol = q.rel_tol * 0.1;
  auto inner = [&](double y) {
    return integrate_adaptive([&](double x) { return (1.0 - f(x, y)) * x; }, 0.0, hi, inner_tol, q.max_depth);
  };
  const double a =
      integrate_adaptive([&](double y) { return y == 0.0 ? 0.0 : inner(y) * y; }, 0.0, hi, q.rel_tol, q.max_depth);
  const double b = integrate_adaptive(
      [&](double y) { return y == 0.0 ? 0.0 : (1.0 - std::exp(-kTwoPi * lambda_n * inner(y))) * y; }, 0.0, hi,
      q.rel_tol, q.max_depth);
  PgflApprox out;
  out.approx = std::exp(-4.0 * kPi * kPi * lambda_n * lambda_m * a);
  out.nested = std::exp(-kTwoPi * lambda_m * b);
  if (!std::isfinite(out.approx) || !std::isfinite(out.nested))
    throw DivergenceError("ternary_pgfl_approx: exponent is not finite");
  return out;
}

// ---------------------------------------------------------------------------
// Laplace transforms E[exp(-s X)]

/// X = |h|^2, h ~ Nakagami(shape, 1).
inline double laplace_nakagami_power(double s, int shape) {
  const double m = static_cast<double>(shape);
  return std::pow(1.0 + s / m, -m);
}

/// X exponential with the given mean (unserved cascade power).
inline double laplace_exponential(double s, double mean) { return 1.0 / (1.0 + s * mean); }

/// X = A^2 with A ~ N(mu, var).
inline double laplace_gaussian_square(double s, double mu, double var) {
  const double t = 1.0 + 2.0 * s * var;
  return std::exp(-s * mu * mu / t) / std::sqrt(t);
}

/// X = A with A ~ N(mu, var).
inline double laplace_gaussian(double s, double mu, double var) { return std::exp(-s * mu + 0.5 * s * s * var); }

// ---------------------------------------------------------------------------
// Moments

/// E|D1 + D2|^2 given the serving distance d, in units of P_tr.
inline double conditional_signal_power(const FadingSpec& f, double lambda_active, double lambda_m, double d,
                                       const QuadratureConfig& q = {}, const AnalyticModel& model = {}) {
  if (f.alpha <= 2.0) throw DivergenceError("conditional_signal_power: path-loss exponent must exceed 2");
  f.validate();
  const double a0 = detail::pl_power(d, 0.5 * f.alpha);
  const double direct = a0 * a0;
  if (lambda_m == 0.0) return direct;

  const detail::PlaneRules rules(q);
  const double half = 0.5 * f.alpha;
  // [p * amplitude kernel, p * power kernel, (1-p) * power kernel]
  const auto j = detail::plane_integral<3>(d, rules, [&](const detail::PlanePoint& p) {
    const double cell = ris_in_cell_probability(lambda_active, p.d_incident, model.cell);
    const double w = detail::reflection_weight(p, model.weight);
    const double amp = detail::pl_power(p.d_incident, half) * detail::pl_power(p.d_reflect, half);
    const double pw = amp * amp;
    return std::array<double, 3>{cell * w * amp, cell * w * pw, (1.0 - cell) * w * pw};
  });
  const double qe = static_cast<double>(f.elements);
  const double mu1 = nakagami_mean_amplitude(f.shape);
  const double mu1_4 = mu1 * mu1 * mu1 * mu1;
  const double served_mean = qe * mu1 * mu1 * lambda_m * j[0];
  const double cross = (model.single_cross_term ? 1.0 : 2.0) * mu1 * a0 * served_mean;
  const double served_sq = lambda_m * (qe + qe * (qe - 1.0) * mu1_4) * j[1];
  const double unserved = lambda_m * qe * j[2];
  return direct + cross + served_mean * served_mean + served_sq + unserved;
}

namespace detail {
template <class F>
double over_serving_distance(double lambda_active, const Rule& rule, F&& h) {
  const double c = 1.0 / std::sqrt(kPi * lambda_active);
  return integrate_mapped(rule, c, 1.0, [&](double d) { return nearest_bs_distance_pdf(d, lambda_active) * h(d); });
}
}  // namespace detail

/// E[P_tr |D1 + D2|^2] averaged over the serving distance.
inline double mean_signal_power(const FadingSpec& f, double lambda_active, double lambda_m, double p_tr,
                                const QuadratureConfig& q = {}, const AnalyticModel& model = {}) {
  require(lambda_active > 0.0 && lambda_m >= 0.0 && p_tr > 0.0, "mean_signal_power: invalid arguments");
  q.validate();
  const Rule rule = gauss_legendre(q.distance_nodes);
  return p_tr * detail::over_serving_distance(lambda_active, rule, [&](double d) {
           return conditional_signal_power(f, lambda_active, lambda_m, d, q, model);
         });
}

struct InterferenceMoments {
  double direct = 0.0;     // E[P I1]
  double reflected = 0.0;  // E[P I2]
  double total() const { return direct + reflected; }
};

inline InterferenceMoments interference_moments(const FadingSpec& f, double lambda_active, double lambda_m,
                                                double p_tr, const QuadratureConfig& q = {},
                                                const AnalyticModel& model = {}) {
  if (f.alpha <= 2.0) throw DivergenceError("interference_moments: path-loss exponent must exceed 2");
  f.validate();
  require(lambda_active >= 0.0 && lambda_m >= 0.0 && p_tr > 0.0, "interference_moments: invalid arguments");
  InterferenceMoments m;
  if (lambda_active == 0.0) return m;
  q.validate();
  const double k = kPi * lambda_active;
  m.direct = kTwoPi * lambda_active * p_tr * (path_loss_beta(f.alpha) - func_F(f.alpha, k, q));
  if (lambda_m > 0.0) {
    const Rule rule = gauss_legendre(q.interferer_nodes);
    const double c = 1.0 / std::sqrt(k);
    const double inner = integrate_mapped(rule, c, 1.0, [&](double x) {
      return func_Q(QKind::one, f.alpha, x, lambda_active, q, model) * x * -std::expm1(-k * x * x);
    });
    m.reflected = p_tr * static_cast<double>(f.elements) * kTwoPi * lambda_active * kTwoPi * lambda_m * inner;
  }
  return m;
}

inline double mean_interference_power(const FadingSpec& f, double lambda_active, double lambda_m, double p_tr,
                                      const QuadratureConfig& q = {}, const AnalyticModel& model = {}) {
  return interference_moments(f, lambda_active, lambda_m, p_tr, q, model).total();
}

// ---------------------------------------------------------------------------
// Coverage, ASE and energy efficiency

namespace detail {

/// log E[exp(-s I1)] for interferers beyond d (s in units of 1/P_tr already applied).
inline double log_laplace_direct(double s, double d, const FadingSpec& f, double lambda_active, const Rule& rule) {
  const double m = static_cast<double>(f.shape);
  const double c = std::max(d, 1.0);
  const double v = integrate_tail(rule, d, c, [&](double x) {
    return -std::expm1(-m * std::log1p(s * pl_power(x, f.alpha) / m)) * x;
  });
  return -kTwoPi * lambda_active * v;
}

/// log E[exp(-s I2)] for interferers beyond d, unserved cascades exponential with mean Q.
inline double log_laplace_reflected(double s, double d, const FadingSpec& f, double lambda_active,
                                    double lambda_m, const Rule& rule, const PlaneRules& rules,
                                    ReflectionWeight weight) {
  if (lambda_m == 0.0) return 0.0;
  const double qe = static_cast<double>(f.elements);
  const double c = std::max(d, 1.0);
  const double v = integrate_tail(rule, d, c, [&](double x) {
    const auto k = plane_integral<1>(x, rules, [&](const PlanePoint& p) {
      const double a = qe * s * pl_power(p.d_incident, f.alpha) * pl_power(p.d_reflect, f.alpha);
      return std::array<double, 1>{reflection_weight(p, weight) * a / (1.0 + a)};
    });
    return k[0] * x;
  });
  return -kTwoPi * lambda_active * lambda_m * v;
}

}  // namespace detail

/// P[SINR >= delta] with the signal power modelled as Gamma(shape) around its
/// conditional mean and the interference Laplace transforms taken exactly
/// under the PGFL approximation.
inline double coverage_probability(const CoverageParams& params, const QuadratureConfig& q = {}) {
  params.validate();
  q.validate();
  const auto& f = params.fading;
  const Rule dist = gauss_legendre(q.distance_nodes);
  const Rule tail = gauss_legendre(q.interferer_nodes);
  const detail::PlaneRules rules(q);
  const double eta = params.kernel();
  const double p_tr = params.power.p_tr;
  const int m = f.shape;

  const double v = detail::over_serving_distance(params.lambda_active, dist, [&](double d) {
    const double mu = conditional_signal_power(f, params.lambda_active, params.lambda_m, d, q, params.model);
    double acc = 0.0;
    for (int k = 1; k <= m; ++k) {
      const double s = k * eta * params.delta / mu;  // per unit of P_tr I
      double lg = -s * params.power.noise / p_tr;
      lg += detail::log_laplace_direct(s, d, f, params.lambda_active, tail);
      lg += detail::log_laplace_reflected(s, d, f, params.lambda_active, params.lambda_m, tail, rules,
                                          params.model.weight);
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      acc += sign * boost::math::binomial_coefficient<double>(static_cast<unsigned>(m), static_cast<unsigned>(k)) *
             std::exp(lg);
    }
    return acc;
  });
  return std::clamp(v, 0.0, 1.0);
}

namespace detail {
/// H[i] = int_{d_i}^inf g(x) dx for ascending d, sharing work between nodes.
template <class G>
std::vector<double> tail_cumulative(const std::vector<double>& d, const Rule& tail, const Rule& gap, G&& g) {
  std::vector<double> h(d.size(), 0.0);
  if (d.empty()) return h;
  const std::size_t last = d.size() - 1;
  h[last] = integrate_tail(tail, d[last], std::max(d[last], 1.0), g);
  for (std::size_t i = last; i-- > 0;) h[i] = h[i + 1] + integrate_interval(gap, d[i], d[i + 1], g);
  return h;
}
}  // namespace detail

/// lambda' E[log2(1 + SINR)] through
/// E ln(1 + S/(I + n)) = int_0^inf (1 - L_S(z)) L_I(z) exp(-z n) / z dz,
/// integrated in u = ln z.
inline double ase(const CoverageParams& params, const QuadratureConfig& q = {}) {
  params.validate();
  q.validate();
  const auto& f = params.fading;
  const double lam = params.lambda_active;
  const Rule dist = gauss_legendre(q.distance_nodes);
  const Rule tail = gauss_legendre(q.interferer_nodes);
  const Rule gap = gauss_legendre(8);
  const Rule seg = gauss_legendre(8);
  const detail::PlaneRules rules(q);
  const double p_tr = params.power.p_tr;
  const double noise = params.power.noise;
  const double m = static_cast<double>(f.shape);
  const double qe = static_cast<double>(f.elements);

  // Serving-distance nodes in ascending order with pdf-weighted weights.
  const double c = 1.0 / std::sqrt(kPi * lam);
  std::vector<double> d(dist.x.size()), wd(dist.x.size()), mu(dist.x.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double u = dist.x[i], om = 1.0 - u;
    d[i] = c * u / om;
    wd[i] = dist.w[i] * c / (om * om) * nearest_bs_distance_pdf(d[i], lam);
    mu[i] = p_tr * conditional_signal_power(f, lam, params.lambda_m, d[i], q, params.model);
  }
  const auto [mu_lo, mu_hi] = std::minmax_element(mu.begin(), mu.end());
  const double u_lo = std::log(1e-8 / *mu_hi);
  const double u_hi = noise > 0.0 ? std::log(60.0 / noise) : std::log(1e12 / *mu_lo);
  // At least one 8-node segment per 8 units of log z, so tiny noise floors stay resolved.
  const int n_seg = std::max({1, q.z_grid / 8, static_cast<int>(std::ceil((u_hi - u_lo) / 8.0))});
  const double h = (u_hi - u_lo) / n_seg;

  double total = 0.0;
  for (int sg = 0; sg < n_seg; ++sg) {
    for (std::size_t iz = 0; iz < seg.x.size(); ++iz) {
      const double u = u_lo + h * (sg + seg.x[iz]);
      const double z = std::exp(u);
      const double s = z * p_tr;
      const auto h1 = detail::tail_cumulative(d, tail, gap, [&](double x) {
        return -std::expm1(-m * std::log1p(s * detail::pl_power(x, f.alpha) / m)) * x;
      });
      std::vector<double> h2(d.size(), 0.0);
      if (params.lambda_m > 0.0) {
        h2 = detail::tail_cumulative(d, tail, gap, [&](double x) {
          const auto k = detail::plane_integral<1>(x, rules, [&](const detail::PlanePoint& p) {
            const double a = qe * s * detail::pl_power(p.d_incident, f.alpha) * detail::pl_power(p.d_reflect, f.alpha);
            return std::array<double, 1>{detail::reflection_weight(p, params.model.weight) * a / (1.0 + a)};
          });
          return k[0] * x;
        });
      }
      double acc = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double signal = -std::expm1(-m * std::log1p(z * mu[i] / m));
        const double lg = -z * noise - kTwoPi * lam * (h1[i] + params.lambda_m * h2[i]);
        acc += wd[i] * signal * std::exp(lg);
      }
      total += h * seg.w[iz] * acc;
    }
  }
  return lam * total / std::numbers::ln2;
}

inline double aee(double ase_value, double lambda_active, double lambda_m, int elements, const PowerModel& power) {
  const double denom = power.area_power(lambda_active, lambda_m, elements);
  if (!(denom > 0.0)) throw std::invalid_argument("aee: power consumption must be positive");
  return ase_value / denom;
}

inline double ece(double coverage_value, double lambda_active, double lambda_m, int elements,
                  const PowerModel& power) {
  const double denom = power.area_power(lambda_active, lambda_m, elements);
  if (!(denom > 0.0)) throw std::invalid_argument("ece: power consumption must be positive");
  return coverage_value / denom;
}

}  // namespace risudn
