#pragma once

// Small-scale fading, path loss, RIS phase design and cascade channels.

#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <vector>

#include "risudn/common.hpp"
#include "risudn/special.hpp"

namespace risudn {

using cplx = std::complex<double>;

struct FadingSpec {
  int shape = 1;       // Nakagami shape, integer >= 1
  double alpha = 4.0;  // path-loss exponent, > 2
  int elements = 1;    // reflecting elements per RIS

  void validate() const {
    require(shape >= 1, "FadingSpec: Nakagami shape must be a positive integer");
    require(alpha > 2.0, "FadingSpec: path-loss exponent must exceed 2");
    require(elements >= 1, "FadingSpec: a RIS needs at least one element");
  }
};

/// First two moments of the cascade channel.
/// Served (phase-aligned) links: |h| is approximately Gaussian(mean_served, var_served).
/// Unserved links: h is approximately zero-mean circular complex Gaussian with
/// E|h|^2 = unserved_power, i.e. variance unserved_power / 2 per real component.
struct CascadeStats {
  double mean_served = 0.0;
  double var_served = 0.0;
  double unserved_power = 0.0;
};

/// E|h| for h ~ Nakagami(shape, 1).
inline double nakagami_mean_amplitude(int shape) {
  const double m = static_cast<double>(shape);
  return std::exp(std::lgamma(m + 0.5) - std::lgamma(m)) / std::sqrt(m);
}

inline CascadeStats cascade_distribution(int shape, int elements) {
  FadingSpec{shape, 4.0, elements}.validate();
  const double mu = nakagami_mean_amplitude(shape);
  const double q = static_cast<double>(elements);
  return {q * mu * mu, q * (1.0 - mu * mu * mu * mu), q};
}

/// |h|^2 ~ Gamma(shape, 1/shape); for integer shape this is a sum of exponentials.
template <class URBG>
double sample_nakagami_power(int shape, URBG& rng) {
  require(shape >= 1, "sample_nakagami_power: shape must be a positive integer");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double prod = 1.0;
  for (int i = 0; i < shape; ++i) prod *= 1.0 - u(rng);  // (0, 1]
  return -std::log(prod) / static_cast<double>(shape);
}

template <class URBG>
double sample_nakagami_amplitude(int shape, URBG& rng) {
  return std::sqrt(sample_nakagami_power(shape, rng));
}

/// Nakagami amplitude with an independent uniform phase.
template <class URBG>
cplx sample_nakagami_channel(int shape, URBG& rng) {
  const double amp = sample_nakagami_amplitude(shape, rng);
  const double ph = kTwoPi * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return std::polar(amp, ph);
}

/// Amplitude-domain path loss (1+d)^(-alpha/2).
inline double path_loss_amplitude(double d, double alpha) {
  require(d >= 0.0, "path_loss_amplitude: distance must be non-negative");
  return std::pow(1.0 + d, -0.5 * alpha);
}

namespace detail {
/// (1+d)^(-alpha/2) without the argument check; exact for alpha = 4.
inline double path_loss_amplitude_fast(double d, double alpha) {
  const double x = 1.0 + d;
  if (alpha == 4.0) return 1.0 / (x * x);
  return std::pow(x, -0.5 * alpha);
}
}  // namespace detail

/// Element phase that co-phases g * phi * w with the direct channel h.
inline cplx design_phase(cplx h_direct, cplx w_elem, cplx g_elem) {
  const double ah = std::abs(h_direct), aw = std::abs(w_elem), ag = std::abs(g_elem);
  require(ah > 0.0 && aw > 0.0 && ag > 0.0, "design_phase: channel coefficient is zero");
  const cplx phi = (h_direct / ah) * (std::conj(w_elem) / aw) * (std::conj(g_elem) / ag);
  return phi / std::abs(phi);
}

inline std::vector<cplx> design_phases(cplx h_direct, std::span<const cplx> w, std::span<const cplx> g) {
  require(w.size() == g.size(), "design_phases: length mismatch");
  std::vector<cplx> out(w.size());
  for (std::size_t q = 0; q < w.size(); ++q) out[q] = design_phase(h_direct, w[q], g[q]);
  return out;
}

/// sum_q g_q phi_q w_q.
inline cplx cascade_gain(std::span<const cplx> g, std::span<const cplx> phases, std::span<const cplx> w) {
  require(g.size() == phases.size() && g.size() == w.size(), "cascade_gain: length mismatch");
  cplx acc{0.0, 0.0};
  for (std::size_t q = 0; q < g.size(); ++q) acc += g[q] * phases[q] * w[q];
  return acc;
}

}  // namespace risudn
