#pragma once

// Homogeneous Poisson point processes on a disk, sampled in polar form, plus the
// intensity-level quantities derived from the Poisson-Voronoi cell-size law.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

#include "risudn/common.hpp"
#include "risudn/rng.hpp"
#include "risudn/special.hpp"

namespace risudn {

struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;

  Vec2 cartesian() const { return {r * std::cos(theta), r * std::sin(theta)}; }
  static PolarPoint from_cartesian(Vec2 p) {
    return {std::hypot(p.x, p.y), wrap_angle(std::atan2(p.y, p.x))};
  }
  friend bool operator==(const PolarPoint&, const PolarPoint&) = default;
};

struct RisSite {
  PolarPoint position;
  double kappa = 0.0;  // placement angle in [0, 2pi)
  friend bool operator==(const RisSite&, const RisSite&) = default;
};

/// Intensities are in points per unit area; lengths are unitless.
struct PointProcessConfig {
  double lambda_n = 0.0;
  double lambda_m = 0.0;
  double lambda_u = 0.0;
  double radius = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    require(lambda_n >= 0.0 && lambda_m >= 0.0 && lambda_u >= 0.0,
            "PointProcessConfig: intensities must be non-negative");
    require(radius > 0.0 && std::isfinite(radius), "PointProcessConfig: radius must be positive");
  }
};

struct NetworkRealization {
  std::vector<PolarPoint> bs;
  std::vector<RisSite> ris;
  std::vector<PolarPoint> ue;
  friend bool operator==(const NetworkRealization&, const NetworkRealization&) = default;
};

/// Radial generation: Poisson count, radius with density 2x/R^2, uniform angle.
template <class URBG>
std::vector<PolarPoint> sample_hppp(double lambda, double radius, URBG& rng) {
  require(lambda >= 0.0, "sample_hppp: intensity must be non-negative");
  require(radius > 0.0, "sample_hppp: radius must be positive");
  std::vector<PolarPoint> pts;
  const double mean = lambda * kPi * radius * radius;
  if (mean <= 0.0) return pts;
  const auto n = std::poisson_distribution<long long>(mean)(rng);
  pts.reserve(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (long long i = 0; i < n; ++i) {
    const double r = radius * std::sqrt(u(rng));
    const double th = wrap_angle(kTwoPi * u(rng));
    pts.push_back({r, th});
  }
  return pts;
}

template <class URBG>
NetworkRealization sample_network(const PointProcessConfig& cfg, URBG& rng) {
  cfg.validate();
  NetworkRealization net;
  net.bs = sample_hppp(cfg.lambda_n, cfg.radius, rng);
  auto ris_pos = sample_hppp(cfg.lambda_m, cfg.radius, rng);
  net.ris.reserve(ris_pos.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& p : ris_pos) net.ris.push_back({p, wrap_angle(kTwoPi * u(rng))});
  net.ue = sample_hppp(cfg.lambda_u, cfg.radius, rng);
  return net;
}

inline NetworkRealization sample_network(const PointProcessConfig& cfg) {
  auto rng = make_engine(cfg.seed);
  return sample_network(cfg, rng);
}

/// Density of the normalized Poisson-Voronoi cell area (gamma law, shape 3.5).
inline double voronoi_area_pdf(double x_b) {
  require(x_b >= 0.0, "voronoi_area_pdf: area must be non-negative");
  if (x_b == 0.0) return 0.0;
  const double c = std::pow(3.5, 3.5) / gamma_fn(3.5);
  return c * std::pow(x_b, 2.5) * std::exp(-3.5 * x_b);
}

struct ActiveBs {
  double probability = 0.0;       // P[BS has >= 1 UE in its cell]
  double active_intensity = 0.0;  // lambda'_un
};

inline ActiveBs active_bs_probability(double lambda_u, double lambda_n) {
  require(lambda_u >= 0.0, "active_bs_probability: lambda_u must be non-negative");
  require(lambda_n > 0.0, "active_bs_probability: lambda_n must be positive");
  const double p = 1.0 - std::pow(1.0 + lambda_u / (3.5 * lambda_n), -3.5);
  return {p, p * lambda_n};
}

/// Normalization of the RIS-in-cell probability. `exact` uses 1/Gamma(3.5) so the
/// probability is 1 at zero distance; `rounded` uses the literal 0.3.
enum class CellCoefficient { exact, rounded };

inline double cell_coefficient(CellCoefficient c) {
  return c == CellCoefficient::exact ? 1.0 / gamma_fn(3.5) : 0.3;
}

/// Probability that a RIS at distance d_I from an active BS lies in its cell,
/// via the cell-area law: c * Gamma(3.5, 3.5 pi lambda' d_I^2).
inline double ris_in_cell_probability(double lambda_active, double d_I,
                                      CellCoefficient coef = CellCoefficient::exact) {
  require(lambda_active > 0.0, "ris_in_cell_probability: intensity must be positive");
  require(d_I >= 0.0, "ris_in_cell_probability: distance must be non-negative");
  const double x = 3.5 * kPi * lambda_active * d_I * d_I;
  if (coef == CellCoefficient::exact) return regularized_upper_gamma(3.5, x);
  return 0.3 * upper_incomplete_gamma(3.5, x);
}

// JSON schema: {"bs": [[r, theta], ...], "ris": [[r, theta, kappa], ...], "ue": [[r, theta], ...]}
inline void to_json(nlohmann::json& j, const PolarPoint& p) { j = nlohmann::json::array({p.r, p.theta}); }
inline void from_json(const nlohmann::json& j, PolarPoint& p) {
  require(j.is_array() && j.size() == 2, "PolarPoint JSON must be [r, theta]");
  p.r = j.at(0).get<double>();
  p.theta = j.at(1).get<double>();
}
inline void to_json(nlohmann::json& j, const RisSite& s) {
  j = nlohmann::json::array({s.position.r, s.position.theta, s.kappa});
}
inline void from_json(const nlohmann::json& j, RisSite& s) {
  require(j.is_array() && j.size() == 3, "RisSite JSON must be [r, theta, kappa]");
  s.position = {j.at(0).get<double>(), j.at(1).get<double>()};
  s.kappa = j.at(2).get<double>();
}
inline void to_json(nlohmann::json& j, const NetworkRealization& n) {
  j = nlohmann::json{{"bs", n.bs}, {"ris", n.ris}, {"ue", n.ue}};
}
inline void from_json(const nlohmann::json& j, NetworkRealization& n) {
  n.bs = j.at("bs").get<std::vector<PolarPoint>>();
  n.ris = j.at("ris").get<std::vector<RisSite>>();
  n.ue = j.at("ue").get<std::vector<PolarPoint>>();
}

}  // namespace risudn
