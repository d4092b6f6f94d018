#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "risudn/channel.hpp"
#include "risudn/rng.hpp"

using namespace risudn;

namespace {

struct Moments {
  double mean = 0.0, var = 0.0;
};

template <class F>
Moments sample_moments(int n, F&& draw) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    s2 += x * x;
  }
  Moments m;
  m.mean = s / n;
  m.var = (s2 - n * m.mean * m.mean) / (n - 1);
  return m;
}

/// Served cascade modulus sum_q |g_q||w_q| built through the phase design.
double served_modulus(int shape, int q, Engine& rng) {
  std::vector<cplx> g(static_cast<std::size_t>(q)), w(g.size());
  for (auto& x : g) x = sample_nakagami_channel(shape, rng);
  for (auto& x : w) x = sample_nakagami_channel(shape, rng);
  const cplx h = sample_nakagami_channel(shape, rng);
  const auto phases = design_phases(h, w, g);
  return std::abs(cascade_gain(g, phases, w));
}

}  // namespace

TEST(Nakagami, RayleighMoments) {
  auto rng = make_engine(1);
  const auto p = sample_moments(100000, [&] { return sample_nakagami_power(1, rng); });
  EXPECT_NEAR(p.mean, 1.0, 0.02);
  const auto a = sample_moments(100000, [&] { return sample_nakagami_amplitude(1, rng); });
  EXPECT_NEAR(a.mean, std::tgamma(1.5), 0.01);
  EXPECT_NEAR(nakagami_mean_amplitude(1), 0.886227, 1e-6);
}

TEST(Nakagami, ShapeTenPowerVariance) {
  auto rng = make_engine(2);
  const auto p = sample_moments(100000, [&] { return sample_nakagami_power(10, rng); });
  EXPECT_NEAR(p.mean, 1.0, 0.01);
  EXPECT_NEAR(p.var, 0.1, 0.005);
}

TEST(Nakagami, RejectsBadShape) {
  auto rng = make_engine(3);
  EXPECT_THROW(sample_nakagami_amplitude(0, rng), std::invalid_argument);
  EXPECT_THROW(cascade_distribution(0, 10), std::invalid_argument);
}

TEST(PathLoss, Values) {
  EXPECT_DOUBLE_EQ(path_loss_amplitude(0.0, 4.0), 1.0);
  EXPECT_DOUBLE_EQ(path_loss_amplitude(1.0, 4.0), 0.25);
  EXPECT_DOUBLE_EQ(std::pow(path_loss_amplitude(1.0, 4.0), 2), 0.0625);
  EXPECT_NEAR(path_loss_amplitude(9.0, 4.0), 1e-2, 1e-15);
  EXPECT_THROW(path_loss_amplitude(-1.0, 4.0), std::invalid_argument);
  EXPECT_NEAR(detail::path_loss_amplitude_fast(2.5, 3.7), path_loss_amplitude(2.5, 3.7), 1e-15);
}

TEST(PhaseDesign, Examples) {
  EXPECT_NEAR(std::abs(design_phase(1.0, 1.0, 1.0) - cplx(1.0, 0.0)), 0.0, 1e-15);
  const cplx phi = design_phase(std::polar(1.0, kPi / 3), std::polar(1.0, kPi / 4), std::polar(1.0, kPi / 6));
  EXPECT_NEAR(std::abs(phi - std::polar(1.0, -kPi / 12)), 0.0, 1e-12);
  EXPECT_THROW(design_phase(0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(design_phase(1.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(design_phase(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(PhaseDesign, AlignsCascadeWithDirectLink) {
  auto rng = make_engine(4);
  for (int i = 0; i < 1000; ++i) {
    const cplx h = sample_nakagami_channel(2, rng), w = sample_nakagami_channel(2, rng),
               g = sample_nakagami_channel(2, rng);
    const cplx phi = design_phase(h, w, g);
    EXPECT_NEAR(std::abs(phi), 1.0, 1e-14);
    const cplx c = g * phi * w;
    EXPECT_NEAR(std::abs(c), std::abs(g) * std::abs(w), 1e-12);
    EXPECT_NEAR(std::remainder(std::arg(c) - std::arg(h), kTwoPi), 0.0, 1e-9);
    const cplx aligned = c * std::conj(h / std::abs(h));
    EXPECT_GT(aligned.real(), 0.0);
    EXPECT_NEAR(aligned.imag(), 0.0, 1e-12);
  }
}

TEST(Cascade, CoherentSumAndSingleElement) {
  const std::vector<cplx> g{std::polar(1.0, 0.3), std::polar(1.0, 2.0)};
  const std::vector<cplx> w{std::polar(1.0, -1.0), std::polar(1.0, 0.7)};
  const auto ph = design_phases(1.0, w, g);
  EXPECT_NEAR(std::abs(cascade_gain(g, ph, w)), 2.0, 1e-12);

  auto rng = make_engine(5);
  for (int i = 0; i < 100; ++i) {
    const std::vector<cplx> g1{sample_nakagami_channel(1, rng)}, w1{sample_nakagami_channel(1, rng)};
    const std::vector<cplx> p1{std::polar(1.0, kTwoPi * uniform01(rng))};
    EXPECT_NEAR(std::abs(cascade_gain(g1, p1, w1)), std::abs(g1[0]) * std::abs(w1[0]), 1e-12);
  }
  const std::vector<cplx> short_w{1.0};
  EXPECT_THROW(cascade_gain(g, ph, short_w), std::invalid_argument);
}

TEST(Cascade, DistributionConstants) {
  const auto s = cascade_distribution(1, 10);
  EXPECT_NEAR(s.mean_served, 10.0 * kPi / 4.0, 1e-12);
  EXPECT_NEAR(s.mean_served, 7.854, 5e-4);
  EXPECT_NEAR(s.var_served, 10.0 * (1.0 - kPi * kPi / 16.0), 1e-12);
  EXPECT_NEAR(s.var_served, 3.832, 1e-3);
  EXPECT_DOUBLE_EQ(s.unserved_power, 10.0);
  const auto big = cascade_distribution(100, 1);
  EXPECT_NEAR(big.mean_served, 1.0, 5e-3);
  for (int shape : {1, 2, 5, 10}) {
    const auto c = cascade_distribution(shape, 7);
    EXPECT_GT(c.mean_served, 0.0);
    EXPECT_GT(c.var_served, 0.0);
  }
}

class ServedCascade : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(ServedCascade, EmpiricalModulusMoments) {
  const auto [shape, q] = GetParam();
  auto rng = make_engine(6, static_cast<std::uint64_t>(shape * 1000 + q));
  const int n = q > 100 ? 20000 : 100000;
  const auto m = sample_moments(n, [&] { return served_modulus(shape, q, rng); });
  const auto s = cascade_distribution(shape, q);
  EXPECT_NEAR(m.mean / s.mean_served, 1.0, 0.01);
  EXPECT_NEAR(m.var / s.var_served, 1.0, 0.05);
}

INSTANTIATE_TEST_SUITE_P(Grid, ServedCascade,
                         ::testing::Values(std::pair{1, 10}, std::pair{10, 10}, std::pair{1, 563}));

TEST(Cascade, UnservedComponentsAreGaussian) {
  // Random element phases: each real component has variance Q/2 for unit-power links.
  auto rng = make_engine(7);
  const int q = 10, n = 50000;
  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    std::vector<cplx> g(q), w(q), ph(q);
    for (int k = 0; k < q; ++k) {
      g[k] = sample_nakagami_channel(1, rng);
      w[k] = sample_nakagami_channel(1, rng);
      ph[k] = std::polar(1.0, kTwoPi * uniform01(rng));
    }
    const cplx c = cascade_gain(g, ph, w);
    re[i] = c.real();
    im[i] = c.imag();
  }
  for (const auto* v : {&re, &im}) {
    double s = 0, s2 = 0, s4 = 0;
    for (double x : *v) {
      s += x;
      s2 += x * x;
      s4 += x * x * x * x;
    }
    const double var = s2 / n, kurt = (s4 / n) / (var * var);
    EXPECT_NEAR(s / n, 0.0, 0.05);
    EXPECT_NEAR(var / (q / 2.0), 1.0, 0.05);
    // Each term has real-part kurtosis 6; the sum of Q terms has 3 + 3/Q.
    EXPECT_NEAR(kurt, 3.0 + 3.0 / q, 0.15);
  }
}
