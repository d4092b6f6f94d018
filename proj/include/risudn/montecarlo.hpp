#pragma once

// End-to-end network drops around a typical UE at the origin: sampling,
// association, channels, received-signal components and SINR.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include <json.hpp>

#include "risudn/channel.hpp"
#include "risudn/geometry.hpp"
#include "risudn/power.hpp"
#include "risudn/ppp.hpp"
#include "risudn/rng.hpp"

namespace risudn {

/// How interfering BSs are switched on.
///  exact:     BS active iff a sampled UE (or the typical UE) attaches to it.
///  thinned:   each non-serving BS active independently with the cell-area probability.
///  saturated: every BS is active, so lambda_n is the active intensity itself.
enum class BsActivity { exact, thinned, saturated };

/// Unserved cascades: exact element-wise random-phase sums, or CN(0, Q) draws.
enum class UnservedCascade { exact, gaussian };

struct DropConfig {
  double lambda_n = 0.01;
  double lambda_u = 0.0;
  double lambda_m = 0.0;
  BsActivity activity = BsActivity::saturated;
  UnservedCascade unserved = UnservedCascade::exact;
  FadingSpec fading{};
  PowerModel power{};
  double window_radius = 0.0;  // 0: guard_factor / sqrt(pi * lambda')
  double guard_factor = 15.0;
  double ris_margin = 25.0;    // RIS window = serving distance + margin (capped by the BS window)
  int max_resample = 64;

  /// Saturated-load config parameterized directly by the active BS intensity.
  static DropConfig with_active_intensity(double lambda_active, double lambda_m, FadingSpec f,
                                          PowerModel p = {}) {
    DropConfig c;
    c.lambda_n = lambda_active;
    c.lambda_m = lambda_m;
    c.fading = f;
    c.power = p;
    return c;
  }

  double active_intensity() const {
    if (activity == BsActivity::saturated) return lambda_n;
    return active_bs_probability(lambda_u, lambda_n).active_intensity;
  }

  double radius() const {
    if (window_radius > 0.0) return window_radius;
    return guard_factor / std::sqrt(kPi * active_intensity());
  }

  void validate() const {
    require(lambda_n > 0.0, "DropConfig: lambda_n must be positive");
    require(lambda_u >= 0.0 && lambda_m >= 0.0, "DropConfig: intensities must be non-negative");
    require(activity == BsActivity::saturated || lambda_u > 0.0,
            "DropConfig: exact/thinned activity needs lambda_u > 0");
    require(guard_factor > 0.0 && ris_margin > 0.0 && window_radius >= 0.0,
            "DropConfig: window parameters must be positive");
    require(max_resample >= 1, "DropConfig: max_resample must be >= 1");
    fading.validate();
    power.validate();
  }
};

/// Received-signal components at the typical UE (amplitudes without sqrt(P_tr)).
struct SignalComponents {
  cplx direct{};          // D1
  cplx reflected{};       // D2, all RISs towards the serving BS link
  double direct_interference = 0.0;     // I1 = sum |h|^2 (1+d)^-alpha over other active BSs
  double reflected_interference = 0.0;  // I2 = sum beta |h_c|^2 path losses over RISs x other BSs
};

struct DropResult {
  double sinr = 0.0;
  double signal_power = 0.0;        // P_tr |D1 + D2|^2
  double interference_power = 0.0;  // P_tr (I1 + I2)
  int n_active_bs = 0;
  int n_serving_ris = 0;  // in the serving cell and reflecting
  int n_cell_ris = 0;     // in the serving cell
  double serving_distance = 0.0;
  SignalComponents components{};
};

namespace detail {

/// Random-phase cascade sum_q g_q phi_q w_q for a link the RIS is not aligned to.
template <class URBG>
cplx random_cascade(std::span<const cplx> g, double g_norm_sq, const DropConfig& cfg, URBG& rng) {
  if (cfg.unserved == UnservedCascade::gaussian) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5 * static_cast<double>(g.size())));
    return {n(rng), n(rng)};
  }
  if (cfg.fading.shape == 1) {
    // Rayleigh w makes the sum exactly CN(0, ||g||^2) given g.
    std::normal_distribution<double> n(0.0, std::sqrt(0.5 * g_norm_sq));
    return {n(rng), n(rng)};
  }
  cplx acc{};
  for (const auto& gq : g) acc += gq * sample_nakagami_channel(cfg.fading.shape, rng);
  return acc;
}

struct ReflectionTest {
  bool reflects = false;
  double d_incident = 0.0;
};

/// Trig-free equivalent of reflection_state(kappa, triangle) for a UE at the origin:
/// kappa + theta_m must fall on the arc [0, pi - dtheta_M].
inline ReflectionTest reflects(Vec2 bs, Vec2 ris, double d_reflect, double cos_k, double sin_k) {
  ReflectionTest t;
  const double dx = ris.x - bs.x, dy = ris.y - bs.y;
  const double d_inc_sq = dx * dx + dy * dy;
  t.d_incident = std::sqrt(d_inc_sq);
  if (t.d_incident <= 0.0 || d_reflect <= 0.0) {
    t.reflects = true;
    return t;
  }
  const double d_dir_sq = bs.x * bs.x + bs.y * bs.y;
  const double cos_m = std::clamp(
      (d_reflect * d_reflect + d_inc_sq - d_dir_sq) / (2.0 * d_reflect * t.d_incident), -1.0, 1.0);
  const double cos_t = dx / t.d_incident, sin_t = dy / t.d_incident;
  // Direction kappa + theta_m.
  const double c = cos_k * cos_t - sin_k * sin_t;
  const double s = sin_k * cos_t + cos_k * sin_t;
  constexpr double eps = 1e-12;
  t.reflects = s >= -eps && c >= -cos_m - eps;
  return t;
}

}  // namespace detail

template <class URBG>
DropResult run_drop(const DropConfig& cfg, URBG& rng) {
  cfg.validate();
  const double radius = cfg.radius();
  const auto& fading = cfg.fading;
  const double alpha = fading.alpha;

  std::vector<PolarPoint> bs_polar;
  for (int attempt = 0; attempt < cfg.max_resample && bs_polar.empty(); ++attempt)
    bs_polar = sample_hppp(cfg.lambda_n, radius, rng);
  if (bs_polar.empty())
    throw DegenerateRealizationError("run_drop: no BS sampled after max_resample attempts");
  const auto bs = to_cartesian(bs_polar);
  const std::size_t n_bs = bs.size();

  std::size_t serving = 0;
  for (std::size_t i = 1; i < n_bs; ++i)
    if (bs_polar[i].r < bs_polar[serving].r) serving = i;

  std::vector<bool> active(n_bs, cfg.activity == BsActivity::saturated);
  if (cfg.activity == BsActivity::exact) {
    auto ue = to_cartesian(sample_hppp(cfg.lambda_u, radius, rng));
    const NearestIndex index(bs);
    for (const auto& u : ue) active[index.nearest(u)] = true;
  } else if (cfg.activity == BsActivity::thinned) {
    const double p = active_bs_probability(cfg.lambda_u, cfg.lambda_n).probability;
    std::bernoulli_distribution on(p);
    for (std::size_t i = 0; i < n_bs; ++i) active[i] = on(rng);
  }
  active[serving] = true;

  std::vector<std::size_t> active_ids;
  std::vector<Vec2> active_pos;
  for (std::size_t i = 0; i < n_bs; ++i) {
    if (!active[i]) continue;
    active_ids.push_back(i);
    active_pos.push_back(bs[i]);
  }

  DropResult out;
  out.n_active_bs = static_cast<int>(active_ids.size());
  out.serving_distance = bs_polar[serving].r;
  auto& sc = out.components;

  // Direct links.
  cplx h_serving{};
  for (std::size_t i : active_ids) {
    const cplx h = sample_nakagami_channel(fading.shape, rng);
    const double pl = path_loss_amplitude(bs_polar[i].r, alpha);
    if (i == serving) {
      h_serving = h;
      sc.direct = h * pl;
    } else {
      sc.direct_interference += std::norm(h) * pl * pl;
    }
  }

  // RIS links, sampled in a disk covering the UE and the serving BS neighbourhood.
  if (cfg.lambda_m > 0.0) {
    const double ris_radius = std::min(radius, out.serving_distance + cfg.ris_margin);
    const auto ris_polar = sample_hppp(cfg.lambda_m, ris_radius, rng);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const NearestIndex active_index(active_pos);
    const auto q = static_cast<std::size_t>(fading.elements);
    std::vector<cplx> g(q);
    const cplx serving_phase = std::abs(h_serving) > 0.0 ? h_serving / std::abs(h_serving) : cplx{1.0, 0.0};

    for (const auto& rp : ris_polar) {
      const double kappa = wrap_angle(kTwoPi * u01(rng));
      const Vec2 ris = rp.cartesian();
      const std::size_t owner = active_ids[active_index.nearest(ris)];
      double g_norm_sq = 0.0;
      for (auto& gq : g) {
        gq = sample_nakagami_channel(fading.shape, rng);
        g_norm_sq += std::norm(gq);
      }
      const double d_reflect = rp.r;
      const double pl_reflect = detail::path_loss_amplitude_fast(d_reflect, alpha);
      const double cos_k = std::cos(kappa), sin_k = std::sin(kappa);

      for (std::size_t i : active_ids) {
        const bool is_serving = i == serving;
        const bool in_cell = is_serving && owner == serving;
        if (in_cell) ++out.n_cell_ris;
        const detail::ReflectionTest test = detail::reflects(bs[i], ris, d_reflect, cos_k, sin_k);
        if (!test.reflects) continue;
        const double pl = pl_reflect * detail::path_loss_amplitude_fast(test.d_incident, alpha);
        if (in_cell) {
          ++out.n_serving_ris;
          double coherent = 0.0;
          for (const auto& gq : g) coherent += std::abs(gq) * sample_nakagami_amplitude(fading.shape, rng);
          sc.reflected += serving_phase * (coherent * pl);
        } else if (is_serving) {
          sc.reflected += detail::random_cascade(g, g_norm_sq, cfg, rng) * pl;
        } else {
          sc.reflected_interference += std::norm(detail::random_cascade(g, g_norm_sq, cfg, rng)) * pl * pl;
        }
      }
    }
  }

  const double p_tr = cfg.power.p_tr;
  out.signal_power = p_tr * std::norm(sc.direct + sc.reflected);
  out.interference_power = p_tr * (sc.direct_interference + sc.reflected_interference);
  out.sinr = out.signal_power / (out.interference_power + cfg.power.noise);
  return out;
}

/// Runs drops 0..n-1; drop i always draws from substream i of `seed`.
inline std::vector<DropResult> run_drops(const DropConfig& cfg, std::size_t n_drops, std::uint64_t seed,
                                         unsigned workers = 0) {
  cfg.validate();
  std::vector<DropResult> out(n_drops);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_drops, 1)));
  auto task = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = make_engine(seed, i);
      out[i] = run_drop(cfg, rng);
    }
  };
  if (workers <= 1) {
    task(0, n_drops);
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n_drops + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t b = std::min(n_drops, w * chunk);
    const std::size_t e = std::min(n_drops, b + chunk);
    if (b < e) pool.emplace_back(task, b, e);
  }
  pool.clear();  // joins
  return out;
}

struct Estimate {
  double value = 0.0;
  double lo = 0.0;  // 95% interval
  double hi = 0.0;
  std::size_t n = 0;
};

/// Wilson score interval for a binomial proportion at 95%.
inline Estimate wilson_interval(std::size_t successes, std::size_t n) {
  Estimate e;
  e.n = n;
  if (n == 0) return e;
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  e.value = p;
  e.lo = std::max(0.0, centre - half);
  e.hi = std::min(1.0, centre + half);
  return e;
}

/// Sample mean with a normal-approximation 95% interval.
template <class Range, class Proj>
Estimate mean_estimate(const Range& xs, Proj proj) {
  Estimate e;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& x : xs) {
    const double v = std::invoke(proj, x);
    sum += v;
    sum_sq += v * v;
    ++e.n;
  }
  if (e.n == 0) return e;
  const double n = static_cast<double>(e.n);
  e.value = sum / n;
  const double var = e.n > 1 ? std::max(0.0, (sum_sq - n * e.value * e.value) / (n - 1.0)) : 0.0;
  const double half = 1.959963984540054 * std::sqrt(var / n);
  e.lo = e.value - half;
  e.hi = e.value + half;
  return e;
}

inline Estimate estimate_coverage(std::span<const DropResult> drops, double delta) {
  require(delta > 0.0, "estimate_coverage: threshold must be positive");
  std::size_t hits = 0;
  for (const auto& d : drops) hits += d.sinr >= delta ? 1 : 0;
  return wilson_interval(hits, drops.size());
}

inline Estimate estimate_coverage(const DropConfig& cfg, double delta, std::size_t n_drops,
                                  std::uint64_t seed, unsigned workers = 0) {
  require(n_drops >= 1, "estimate_coverage: need at least one drop");
  const auto drops = run_drops(cfg, n_drops, seed, workers);
  return estimate_coverage(drops, delta);
}

struct SignalStats {
  Estimate signal;        // E[P |D1 + D2|^2]
  Estimate interference;  // E[P (I1 + I2)]
  Estimate direct;        // E[P |D1|^2]
  Estimate reflected;     // E[P |D2|^2]
  Estimate direct_interference;
  Estimate reflected_interference;
};

inline SignalStats estimate_signal_stats(std::span<const DropResult> drops, double p_tr) {
  SignalStats s;
  s.signal = mean_estimate(drops, &DropResult::signal_power);
  s.interference = mean_estimate(drops, &DropResult::interference_power);
  s.direct = mean_estimate(drops, [&](const DropResult& d) { return p_tr * std::norm(d.components.direct); });
  s.reflected = mean_estimate(drops, [&](const DropResult& d) { return p_tr * std::norm(d.components.reflected); });
  s.direct_interference =
      mean_estimate(drops, [&](const DropResult& d) { return p_tr * d.components.direct_interference; });
  s.reflected_interference =
      mean_estimate(drops, [&](const DropResult& d) { return p_tr * d.components.reflected_interference; });
  return s;
}

/// Area spectral efficiency lambda' * E[log2(1 + SINR)].
inline Estimate estimate_ase(std::span<const DropResult> drops, double lambda_active) {
  auto e = mean_estimate(drops, [](const DropResult& d) { return std::log2(1.0 + d.sinr); });
  e.value *= lambda_active;
  e.lo *= lambda_active;
  e.hi *= lambda_active;
  return e;
}

inline void to_json(nlohmann::json& j, const DropResult& d) {
  j = nlohmann::json{{"sinr", d.sinr},
                     {"signal_power", d.signal_power},
                     {"interference_power", d.interference_power},
                     {"n_active_bs", d.n_active_bs},
                     {"n_serving_ris", d.n_serving_ris},
                     {"n_cell_ris", d.n_cell_ris},
                     {"serving_distance", d.serving_distance},
                     {"I1", d.components.direct_interference},
                     {"I2", d.components.reflected_interference}};
}

}  // namespace risudn
