#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's sampling or analysis code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Kolmogorov-Smirnov statistic of samples against a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

/// Asymptotic p-value of the KS statistic (Stephens' small-sample correction).
inline double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double l = (sn + 0.12 + 0.11 / sn) * d;
  if (l < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * l * l);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Homogeneous Poisson points in a disk, drawn by rejection from the bounding square.
template <class Rng>
std::vector<std::pair<double, double>> disk_ppp(double lambda, double radius, Rng& rng) {
  std::poisson_distribution<int> count(lambda * 4.0 * radius * radius);
  std::uniform_real_distribution<double> u(-radius, radius);
  const int n = count(rng);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) {
    const double x = u(rng), y = u(rng);
    if (x * x + y * y <= radius * radius) pts.emplace_back(x, y);
  }
  return pts;
}

/// Classical downlink network without RIS: typical UE at the origin served by
/// the nearest BS, Nakagami power fading, all other BSs interfere.
inline std::vector<double> binary_udn_sinr(double lambda, int shape, double alpha, double p_tr, double noise,
                                           std::size_t n, std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  std::gamma_distribution<double> fade(static_cast<double>(shape), 1.0 / shape);
  const double radius = 20.0 / std::sqrt(pi * lambda);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const auto pts = disk_ppp(lambda, radius, rng);
    if (pts.empty()) continue;
    std::vector<double> d(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) d[i] = std::hypot(pts[i].first, pts[i].second);
    const auto serving = static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
    double s = 0.0, interf = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double rx = fade(rng) * std::pow(1.0 + d[i], -alpha);
      (i == serving ? s : interf) += rx;
    }
    out.push_back(p_tr * s / (p_tr * interf + noise));
  }
  return out;
}

/// E[sum_n sum_m f(|x_n|, |y_m|)] over two independent PPPs on a disk.
template <class F>
double double_sum_mc(F&& f, double lambda_n, double lambda_m, double radius, std::size_t reps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double acc = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto a = disk_ppp(lambda_n, radius, rng);
    const auto b = disk_ppp(lambda_m, radius, rng);
    double s = 0.0;
    for (const auto& p : a) {
      const double x = std::hypot(p.first, p.second);
      for (const auto& q : b) s += f(x, std::hypot(q.first, q.second));
    }
    acc += s;
  }
  return acc / static_cast<double>(reps);
}

/// E[prod_n prod_m f(|x_n|, |y_m|)] over two independent PPPs on a disk.
template <class F>
double double_product_mc(F&& f, double lambda_n, double lambda_m, double radius, std::size_t reps,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double acc = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto a = disk_ppp(lambda_n, radius, rng);
    const auto b = disk_ppp(lambda_m, radius, rng);
    double lg = 0.0;
    for (const auto& p : a) {
      const double x = std::hypot(p.first, p.second);
      for (const auto& q : b) lg += std::log(f(x, std::hypot(q.first, q.second)));
    }
    acc += std::exp(lg);
  }
  return acc / static_cast<double>(reps);
}

/// Plain Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
