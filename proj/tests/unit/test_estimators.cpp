#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rmtlab/rmtlab.hpp"

using namespace rmtlab;

namespace {

EnsembleSpec ginibre(int N, Field f = Field::Complex) {
  EnsembleSpec s;
  s.family = Family::Ginibre;
  s.field = f;
  s.N = N;
  return s;
}

// Poisson process of intensity 1/pi on the disk of radius sqrt(N), labelled as complex Ginibre clouds.
std::vector<EigenvalueCloud> poisson_clouds(int N, int samples, std::uint64_t seed) {
  std::vector<EigenvalueCloud> out;
  const double R = std::sqrt(double(N));
  for (int i = 0; i < samples; ++i) {
    RngStream rng(seed, i);
    EigenvalueCloud c;
    c.spec = ginibre(N);
    c.index = i;
    const int n = rng.poisson(N);
    for (int k = 0; k < n; ++k) c.points.push_back(std::polar(R * std::sqrt(rng.uniform()), 2 * kPi * rng.uniform()));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<EigenvalueCloud> clouds_of(const EnsembleSpec& s, int samples, std::uint64_t seed) {
  std::vector<EigenvalueCloud> out;
  for (int i = 0; i < samples; ++i) out.push_back(sample_cloud(s, seed, i));
  return out;
}

// Pair estimates shared by several tests.
const std::vector<EigenvalueCloud>& ginibre256() {
  static const auto c = clouds_of(ginibre(256), 500, 17);
  return c;
}

const PairCorrelationEstimate& ginibre256_pairs() {
  static const auto e = pair_correlation_isotropic(ginibre256(), linspace_edges(0.0, 3.4, 34), 0.5);
  return e;
}

double mean_stderr(const PairCorrelationEstimate& e) {
  double s = 0.0;
  for (double x : e.stderr_) s += x;
  return s / e.bins();
}

}  // namespace

// ---------------------------------------------------------------------------
// Radial density

TEST(RadialDensity, SinglePointAtUnitRadius) {
  for (int samples : {1, 7}) {
    std::vector<EigenvalueCloud> clouds(samples);
    for (auto& c : clouds) {
      c.spec = ginibre(1);
      c.points = {cplx(0.0, 1.0)};
    }
    const auto e = radial_density(clouds, {0.5, 1.5});
    EXPECT_NEAR(e.density[0], 1.0 / (2.0 * kPi), 1e-15);
    EXPECT_EQ(e.stderr_[0], 0.0);
  }
}

TEST(RadialDensity, GinibreBulkIsFlat) {
  const double R = 16.0;
  const auto e = radial_density(clouds_of(ginibre(256), 200, 3), linspace_edges(0.2 * R, 0.8 * R, 6));
  for (std::size_t k = 0; k < e.bins(); ++k) EXPECT_NEAR(e.density[k] * kPi, 1.0, 0.03) << k;
}

TEST(RadialDensity, UnitFrameIntegratesToN) {
  const int N = 64;
  const auto e = radial_density(clouds_of(ginibre(N), 100, 4), linspace_edges(0.0, 1.05, 21), Frame::Unit,
                                std::sqrt(double(N)));
  double mass = 0.0;
  for (std::size_t k = 0; k < e.bins(); ++k) mass += e.density[k] * e.area(k);
  EXPECT_NEAR(mass / N, 1.0, 0.02);
}

TEST(RadialDensity, QuaternionRepresentativesCountTwice) {
  const int N = 32;
  const auto e = radial_density(clouds_of(ginibre(N, Field::Quaternion), 50, 5), {0.0, 100.0});
  EXPECT_NEAR(e.density[0] * e.area(0), 2.0 * N, 1e-9);
}

TEST(RadialDensity, SelfDualOvershootAtTheEdge) {
  EnsembleSpec s;
  s.family = Family::SelfDual;
  s.field = Field::Quaternion;
  s.N = 70;
  const double shift = spectral_radius(s);
  EXPECT_NEAR(shift, std::sqrt(140.0), 1e-12);
  const auto e = radial_density(clouds_of(s, 200, 6), linspace_edges(-shift, 0.3 * shift, 60), Frame::EdgeShifted,
                                1.0, shift);
  const double rho_b = 1.0 / (2.0 * kPi);
  EXPECT_GE(*std::max_element(e.density.begin(), e.density.end()), 1.05 * rho_b);
}

TEST(RadialDensity, PoissonControlIsUniform) {
  const int N = 100;
  const auto e = radial_density(poisson_clouds(N, 400, 1), linspace_edges(0.0, 10.0, 20));
  for (std::size_t k = 0; k < e.bins(); ++k)
    EXPECT_LE(std::abs(e.density[k] - 1.0 / kPi), 3.0 * e.stderr_[k]) << k;
}

TEST(RadialDensity, MixedSpecsRejected) {
  auto a = poisson_clouds(10, 1, 1);
  auto b = poisson_clouds(12, 1, 1);
  a.push_back(b[0]);
  EXPECT_THROW(radial_density(a, {0.0, 1.0}), InputError);
}

TEST(RadialDensity, MergeOrderIsIrrelevant) {
  const auto clouds = clouds_of(ginibre(20, Field::Real), 40, 8);
  const auto edges = linspace_edges(0.0, 6.0, 30);
  RadialDensityAccumulator all(edges), a(edges), b(edges), c(edges);
  for (const auto& x : clouds) all.add(x);
  for (std::size_t i = 0; i < clouds.size(); ++i) (i % 3 == 0 ? a : i % 3 == 1 ? b : c).add(clouds[i]);
  RadialDensityAccumulator left(edges), right(edges);
  left.merge(a);
  left.merge(b);
  left.merge(c);
  right.merge(c);
  right.merge(a);
  right.merge(b);
  EXPECT_EQ(left.counts(), all.counts());
  EXPECT_EQ(right.counts(), all.counts());
  const auto e0 = all.result(), e1 = right.result();
  for (std::size_t k = 0; k < e0.bins(); ++k) {
    EXPECT_NEAR(e0.density[k], e1.density[k], 1e-12);
    EXPECT_NEAR(e0.stderr_[k], e1.stderr_[k], 1e-12);
  }
  RadialDensityAccumulator other(linspace_edges(0.0, 6.0, 31));
  EXPECT_THROW(other.merge(all), InputError);
}

TEST(StripProfile, UniformCloudHasFlatProfile) {
  const auto e = [] {
    StripProfileAccumulator acc(linspace_edges(-5.0, 5.0, 10), 3.0);
    for (const auto& c : poisson_clouds(200, 200, 9)) acc.add(c);
    return acc.result();
  }();
  for (std::size_t k = 0; k < e.density.size(); ++k)
    EXPECT_LE(std::abs(e.density[k] - 1.0 / kPi), 3.5 * e.stderr_[k]) << k;
}

// ---------------------------------------------------------------------------
// Pair correlation

TEST(PairCorrelation, LensArea) {
  EXPECT_NEAR(detail::lens_area(1.0, 2.0, 0.5), kPi, 1e-15);
  EXPECT_EQ(detail::lens_area(1.0, 1.0, 2.5), 0.0);
  // Two unit disks a unit apart overlap in 2 pi / 3 - sqrt(3) / 2.
  EXPECT_NEAR(detail::lens_area(1.0, 1.0, 1.0), 2 * kPi / 3 - std::sqrt(3.0) / 2, 1e-14);
}

TEST(PairCorrelation, PoissonControlHasNoCorrelation) {
  const auto e = pair_correlation_isotropic(poisson_clouds(256, 400, 2), linspace_edges(0.0, 4.0, 20), 0.5);
  EXPECT_FALSE(e.low_power);
  for (std::size_t k = 0; k < e.bins(); ++k) EXPECT_LE(std::abs(e.rho2T[k]), 3.0 * e.stderr_[k]) << k;
  const auto m = moments_of_rho2T(e, {0});
  EXPECT_LE(std::abs(m[0].value), 3.0 * m[0].stderr_);
  // 25600 window points: the relative standard error is 0.6%.
  EXPECT_NEAR(e.rho_window * kPi, 1.0, 0.02);
}

TEST(PairCorrelation, GinibreMatchesBulkKernel) {
  const auto& e = ginibre256_pairs();
  for (std::size_t k = 0; k < e.bins(); ++k) {
    if (e.center(k) > 3.0) break;
    // Bin average of the kernel over the annulus.
    const double a = e.r_edges[k], b = e.r_edges[k + 1];
    const double want = -(std::exp(-a * a) - std::exp(-b * b)) / (kPi * kPi * (b * b - a * a));
    EXPECT_LE(std::abs(e.rho2T[k] - want), 3.0 * e.stderr_[k]) << "r=" << e.center(k);
  }
}

TEST(PairCorrelation, GinibrePerfectScreening) {
  const auto m = moments_of_rho2T(ginibre256_pairs(), {0});
  EXPECT_LE(std::abs(m[0].value + 1.0), 3.0 * m[0].stderr_) << m[0].value << " +- " << m[0].stderr_;
}

TEST(PairCorrelation, LowPowerFlag) {
  const auto e = pair_correlation_isotropic(poisson_clouds(20, 2, 3), linspace_edges(0.0, 1.0, 5), 0.5);
  EXPECT_TRUE(e.low_power);
  EXPECT_THROW(pair_correlation_isotropic(poisson_clouds(20, 2, 3), linspace_edges(0.0, 1.0, 5), 0.9),
               ParameterError);
}

TEST(PairCorrelation, FixedReferenceDensity) {
  const auto e = pair_correlation_isotropic(poisson_clouds(100, 20, 4), linspace_edges(0.0, 2.0, 10), 0.5, 0.25);
  EXPECT_TRUE(e.rho_b_fixed);
  EXPECT_EQ(e.rho_b, 0.25);
  EXPECT_NEAR(e.ratio(3), e.rho2T[3] / 0.0625, 1e-15);
}

TEST(PairCorrelation, MergeOrderIsIrrelevant) {
  const auto clouds = poisson_clouds(80, 64, 5);
  const auto edges = linspace_edges(0.0, 3.0, 15);
  const double w = 4.0;
  PairCorrelationAccumulator all(edges, w), a(edges, w), b(edges, w);
  for (const auto& c : clouds) all.add(c);
  for (std::size_t i = 0; i < clouds.size(); ++i) (i < 40 ? a : b).add(clouds[i]);
  PairCorrelationAccumulator ab(edges, w), ba(edges, w);
  ab.merge(a);
  ab.merge(b);
  ba.merge(b);
  ba.merge(a);
  const auto e0 = all.result(), e1 = ab.result(), e2 = ba.result();
  for (std::size_t k = 0; k < e0.bins(); ++k) {
    EXPECT_NEAR(e0.rho2T[k], e1.rho2T[k], 1e-12);
    EXPECT_NEAR(e0.rho2T[k], e2.rho2T[k], 1e-12);
    EXPECT_NEAR(e0.stderr_[k], e2.stderr_[k], 1e-12);
  }
}

TEST(PairCorrelation, JackknifeErrorsShrinkLikeInverseRoot) {
  const auto edges = linspace_edges(0.0, 3.0, 12);
  const auto small = pair_correlation_isotropic(poisson_clouds(128, 64, 6), edges, 0.5);
  const auto large = pair_correlation_isotropic(poisson_clouds(128, 640, 7), edges, 0.5);
  const double slope = std::log(mean_stderr(large) / mean_stderr(small)) / std::log(10.0);
  EXPECT_NEAR(slope, -0.5, 0.1);
}

// ---------------------------------------------------------------------------
// Moments

TEST(Moments, TabulatedBulkKernel) {
  const double rho = 1.0 / kPi;
  const auto e = tabulate_rho2T([&](double r) { return bulk_rho2T(r, rho); }, linspace_edges(0.0, 6.0, 3000), rho);
  const auto m = moments_of_rho2T(e);
  const double want[] = {-1.0, -1.0 / kPi, -2.0 / (kPi * kPi), -6.0 / (kPi * kPi * kPi)};
  ASSERT_EQ(m.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(m[k].value, want[k], 1e-4) << m[k].p;
    EXPECT_FALSE(m[k].bias_warning);
  }
}

TEST(Moments, TruncatedSupportWarns) {
  const double rho = 1.0 / kPi;
  const auto e = tabulate_rho2T([&](double r) { return bulk_rho2T(r, rho); }, linspace_edges(0.0, 1.0, 50), rho);
  EXPECT_TRUE(moments_of_rho2T(e)[0].bias_warning);
  EXPECT_THROW(moments_of_rho2T(e, {3}), ParameterError);
}

// ---------------------------------------------------------------------------
// Smoothing and shape matching

TEST(Smoothing, ConstantStaysConstant) {
  const auto c = smooth(linspace_edges(0.0, 5.0, 50), std::vector<double>(50, 0.7), 0.3);
  for (double y : c.y) EXPECT_NEAR(y, 0.7, 1e-15);
  EXPECT_EQ(c.bandwidth, 0.3);
}

TEST(Smoothing, SingleBinBecomesGaussianBump) {
  const auto edges = linspace_edges(-5.0, 5.0, 100);
  std::vector<double> v(100, 0.0);
  v[50] = 10.0;  // mass 1 in a bin of width 0.1
  const double bw = 0.5;
  const auto c = smooth(edges, v, bw);
  double mass = 0.0;
  for (std::size_t k = 0; k < c.y.size(); ++k) mass += c.y[k] * 0.1;
  EXPECT_NEAR(mass, 1.0, 0.005);
  const double x0 = c.x[50];
  for (std::size_t k = 40; k <= 60; ++k) {
    const double g = std::exp(-0.5 * std::pow((c.x[k] - x0) / bw, 2)) / (std::sqrt(2 * kPi) * bw);
    EXPECT_NEAR(c.y[k], g, 0.01 * g / 0.1 + 1e-3);
  }
}

TEST(Smoothing, PreservesIntegral) {
  const auto edges = linspace_edges(0.0, 6.0, 60);
  std::vector<double> v(60);
  for (int k = 0; k < 60; ++k) {
    const double r = 0.05 + 0.1 * k;
    v[k] = -std::exp(-r * r) + 0.3 * std::exp(-4 * (r - 2) * (r - 2));
  }
  const auto c = smooth(edges, v, default_bandwidth(1.0 / kPi));
  double a = 0.0, b = 0.0;
  for (int k = 0; k < 60; ++k) {
    a += v[k] * 0.1;
    b += c.y[k] * 0.1;
  }
  EXPECT_NEAR(b / a, 1.0, 0.005);
  EXPECT_THROW(smooth(edges, v, 0.0), ParameterError);
}

TEST(ShapeMatch, IdenticalAndScaled) {
  SmoothedCurve c;
  for (int k = 1; k <= 20; ++k) {
    c.x.push_back(0.1 * k);
    c.y.push_back(rq_rho1(0.0, 0.1 * k));
  }
  auto model = [](double y) { return rq_rho1(0.0, y); };
  const auto m1 = shape_match(c, model);
  EXPECT_NEAR(m1.scale, 1.0, 1e-15);
  EXPECT_NEAR(m1.max_rel_dev, 0.0, 1e-15);
  for (double& y : c.y) y *= 2.0;
  const auto m2 = shape_match(c, model);
  EXPECT_NEAR(m2.scale, 2.0, 1e-15);
  EXPECT_NEAR(m2.max_rel_dev, 0.0, 1e-15);
  EXPECT_THROW(shape_match(c, [](double) { return 0.0; }), FitError);
}
