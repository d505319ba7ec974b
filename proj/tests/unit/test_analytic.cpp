#include <cmath>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "rmtlab/rmtlab.hpp"

using namespace rmtlab;

namespace {

const cplx I(0.0, 1.0);

// Independent mass oracle: 2 pi int r rho(r) dr with tanh-sinh, split at the support radii.
double radial_integral(const DensityModel& d) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const Support sup = support_radii(d);
  // Product laws are integrably singular at the origin; r = t^m removes the singularity.
  const double m = d.m;
  auto f = [&](double t) {
    const double r = std::pow(t, m);
    if (!(r > 1e-200 && r < 1e200)) return 0.0;
    return 2.0 * kPi * r * predicted_density(d, cplx(r, 0.0)) * m * std::pow(t, m - 1);
  };
  return ts.integrate(f, std::pow(sup.inner, 1 / m), std::pow(sup.outer, 1 / m), 1e-12);
}

}  // namespace

// ---------------------------------------------------------------------------
// Bulk and edge kernels

TEST(Bulk, Values) {
  EXPECT_DOUBLE_EQ(bulk_rho2T(0.0, 1.0 / kPi), -1.0 / (kPi * kPi));
  EXPECT_EQ(bulk_rho2T(40.0, 1.0), 0.0);
  EXPECT_NEAR(bulk_rho2T(1.0, 2.0), -4.0 * std::exp(-2.0 * kPi), 1e-15);
}

TEST(EdgeProfile, Limits) {
  EXPECT_NEAR(edge_profile_H(0.0).real(), 1.0 / (2.0 * kPi), 1e-16);
  EXPECT_NEAR(edge_profile_H(8.0).real(), 1.0 / kPi, 1e-16);
  EXPECT_NEAR(edge_profile_H(-8.0).real(), 0.0, 1e-16);
}

TEST(EdgeProfile, HighPrecisionValues) {
  // mpmath at 30 digits.
  EXPECT_NEAR(edge_profile_H(0.3).real(), 0.23101240748721500666, 1e-15);
  EXPECT_NEAR(edge_profile_H(-0.7).real(), 0.025705643009284834025, 1e-15);
  const cplx a = edge_profile_H(cplx(0.5, 1.0)), b = edge_profile_H(cplx(1.0, -2.0));
  EXPECT_LT(std::abs(a - cplx(0.5749061220196715698, 0.060938467460952881918)), 1e-14);
  EXPECT_LT(std::abs(b - cplx(11.312141818355603796, -4.1835787308186396482)) / std::abs(b), 1e-13);
}

TEST(EdgeProfile, DerivativeMatchesFiniteDifference) {
  for (double y : {-1.5, -0.2, 0.0, 0.4, 2.0}) {
    const double h = 1e-5;
    const double fd = (edge_profile_H(y + h).real() - edge_profile_H(y - h).real()) / (2 * h);
    EXPECT_NEAR(edge_profile_H_derivative(y), fd, 1e-9);
  }
}

TEST(EdgeCorrelation, CoincidenceTendsToBulk) {
  for (double y : {-1.0, 0.0, 1.0}) {
    const double h = edge_profile_H(y).real();
    EXPECT_NEAR(edge_rho2T(0.3, y, 0.3, y), -h * h, 1e-15);
    EXPECT_NEAR(edge_rho2(0.3, y, 0.3, y), 0.0, 1e-15);
  }
  EXPECT_NEAR(edge_rho2T(0.0, 3.0, 0.0, 3.0), bulk_rho2T(0.0, 1.0 / kPi), 1e-9);
}

TEST(EdgeCorrelation, ExchangeSymmetry) {
  for (double dx : {0.0, 0.7, 2.5})
    EXPECT_DOUBLE_EQ(edge_rho2T(1.0, 0.2, 1.0 + dx, -0.4), edge_rho2T(1.0 + dx, 0.2, 1.0, -0.4));
}

TEST(EdgeCorrelation, NonPositiveOnGrid) {
  for (double y = -2.0; y <= 3.0; y += 0.25)
    for (double dx = 0.0; dx <= 6.0; dx += 0.25) EXPECT_LE(edge_rho2T(0.0, y, dx, y), 0.0);
}

TEST(EdgeCorrelation, LargeSeparationForm) {
  for (double dx : {8.0, 16.0}) {
    const double exact = edge_rho2T(0.0, 0.0, dx, 0.0);
    const double asym = edge_rho2T_asymptotic(dx, 0.0, 0.0);
    EXPECT_LT(std::abs(exact - asym) / std::abs(asym), 0.1) << dx;
  }
  // The error shrinks roughly like dx^-2.
  const double e8 = std::abs(edge_rho2T(0, 0, 8, 0) / edge_rho2T_asymptotic(8, 0, 0) - 1);
  const double e16 = std::abs(edge_rho2T(0, 0, 16, 0) / edge_rho2T_asymptotic(16, 0, 0) - 1);
  EXPECT_LT(e16, 0.5 * e8);
}

// ---------------------------------------------------------------------------
// Real quaternion Ginibre near the real axis

TEST(RqF, Properties) {
  const cplx w(0.3, -0.8), z(1.1, 0.4);
  EXPECT_EQ(rq_f(w, w), cplx(0.0));
  EXPECT_LT(std::abs(rq_f(z, w) + rq_f(w, z)), 1e-15);
  EXPECT_LT(std::abs(rq_f(0.0, 1.0) - cplx(0.0, 0.449035342959089224920847733356)), 1e-15);
}

TEST(RqRho1, AxisAndTranslation) {
  EXPECT_EQ(rq_rho1(0.7, 0.0), 0.0);
  EXPECT_NEAR(rq_rho1(0.0, 1.0), rq_rho1(5.0, 1.0), 1e-12);
  EXPECT_THROW(rq_rho1(0.0, -1.0), DomainError);
}

TEST(RqRho1, HighPrecisionValues) {
  const double y[] = {0.25, 0.5, 1.0, 2.0, 3.5};
  const double want[] = {0.073266068102983497054, 0.23070414879500566007, 0.40742906234779730536,
                         0.34427925657953042341, 0.32525150795179100432};
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(rq_rho1(0.0, y[k]), want[k], 1e-14) << y[k];
}

TEST(RqRho1, ApproachesBulkAlgebraically) {
  // rho1 = (1/pi)(1 + 1/(4y^2) + 3/(16y^4) + 15/(64y^6) + ...).
  for (double y : {6.0, 10.0}) {
    const double s = (1 + 1 / (4 * y * y) + 3 / (16 * std::pow(y, 4)) + 15 / (64 * std::pow(y, 6))) / kPi;
    EXPECT_NEAR(rq_rho1(0.0, y), s, 1e-7) << y;
  }
  EXPECT_GT(std::abs(rq_rho1(0.0, 6.0) - 1 / kPi), std::abs(rq_rho1(0.0, 10.0) - 1 / kPi));
  EXPECT_GT(std::abs(rq_rho1(0.0, 10.0) - 1 / kPi), std::abs(rq_rho1(0.0, 20.0) - 1 / kPi));
}

TEST(RqRho2T, HighPrecisionValues) {
  struct Case { cplx z1, z2; double want; };
  const Case cases[] = {
      {I, cplx(0.5, 0.7), -0.11483290660869722573},
      {cplx(0.3, 0.4), cplx(1.2, 1.5), -0.015326262105083394316},
      {cplx(-1, 2), cplx(0, 0.2), -0.00053850865266953792337},
      {cplx(2, 0.5), cplx(2.5, 0.5), -0.050589854194427571598},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(rq_rho2T(c.z1, c.z2), c.want, 1e-14 + 1e-12 * std::abs(c.want));
    const cplx p = rq_rho2T_product_form(c.z1, c.z2);
    EXPECT_NEAR(p.real(), c.want, 1e-12);
    EXPECT_LT(std::abs(p.imag()), 1e-12);
  }
}

TEST(RqRho2T, Symmetries) {
  const cplx z1(0.2, 0.9), z2(-0.6, 0.3);
  EXPECT_EQ(rq_rho2T(z1, cplx(5.0, 0.0)), 0.0);
  EXPECT_NEAR(rq_rho2T(z1, z2), rq_rho2T(z2, z1), 1e-15);
  for (double t : {-3.0, 1.7, 40.0}) EXPECT_NEAR(rq_rho2T(z1 + t, z2 + t), rq_rho2T(z1, z2), 1e-10);
  // Even in y2: the upper-half evaluation equals the product form at conj z2.
  EXPECT_NEAR(rq_rho2T_product_form(z1, std::conj(z2)).real(), rq_rho2T(z1, z2), 1e-12);
}

TEST(RqRho2T, GaussianDecayAlongAxis) {
  // mpmath at 40 digits: 2.6789e-10 at x2 = 6, -1.157e-13 at x2 = 7.
  EXPECT_NEAR(rq_rho2T(I, cplx(6.0, 1.0)), 2.678946860335623e-10, 1e-22);
  EXPECT_NEAR(rq_rho2T(I, cplx(7.0, 1.0)), -1.156759415143744e-13, 1e-24);
  EXPECT_LE(std::abs(rq_rho2T(I, cplx(7.0, 1.0))), 1e-12);
  EXPECT_THROW(rq_rho2T(cplx(0, -1), I), DomainError);
}

// ---------------------------------------------------------------------------
// CSE truncation

TEST(CseTrunc, ExactDensityValues) {
  const double r[] = {0.0, 0.3, 0.7, 0.95};
  const double want[] = {0.35367765131532296838, 0.44245380850163014804, 1.6970907980339630747,
                         2.2872200011288095367};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(cse_trunc_rho1(r[k], 5), want[k], 1e-13 * want[k]) << r[k];
  EXPECT_NEAR(cse_trunc_rho1(0.0, 5), 10.0 / (9.0 * kPi), 1e-15);
}

TEST(CseTrunc, VanishesAtBoundary) {
  for (int N : {1, 5, 20}) EXPECT_LT(cse_trunc_rho1(1.0 - 1e-9, N), 1e-6 * N * N) << N;
  EXPECT_NEAR(cse_trunc_rho1(0.5, 1), 2.0 / kPi * 0.75, 1e-15);
  EXPECT_THROW(cse_trunc_rho1(1.0, 5), DomainError);
}

TEST(CseTrunc, MassIsN) {
  for (int N : {1, 5, 20}) {
    EXPECT_NEAR(radial_integral(DensityModel{ModelKind::CseTruncExact, double(N)}), N, 1e-6 * N);
    EXPECT_NEAR(cse_trunc_mass(1.0, N), N, 1e-12 * N);
  }
}

TEST(CseTrunc, ApproachesDeterminantalLimit) {
  for (double r : {0.2, 0.5}) {
    const double lim = cse_limit_rhok({cplx(r, 0.0)});
    EXPECT_LT(std::abs(cse_trunc_rho1(r, 400) / lim - 1), 0.01) << r;
  }
}

TEST(CseLimit, Values) {
  EXPECT_NEAR(cse_limit_rhok({0.0}), 1.0 / kPi, 1e-16);
  EXPECT_NEAR(cse_limit_rhok({cplx(1e-9, 0.0), cplx(0.0, 1e-9)}), 0.0, 1e-12);
  EXPECT_THROW(cse_limit_rhok({cplx(1.0, 0.0)}), DomainError);
}

TEST(CseLimit, MobiusInvariance) {
  const cplx a = 0.3;
  auto phi = [&](cplx z) { return (z - a) / (1.0 - std::conj(a) * z); };
  auto jac = [&](cplx z) { return std::norm((1.0 - std::norm(a)) / std::pow(1.0 - std::conj(a) * z, 2)); };
  const cplx z1(0.1, 0.4), z2(-0.5, -0.2);
  EXPECT_NEAR(cse_limit_rhok({z1}), cse_limit_rhok({phi(z1)}) * jac(z1), 1e-13);
  const double lhs = cse_limit_rhok({z1, z2});
  const double rhs = cse_limit_rhok({phi(z1), phi(z2)}) * jac(z1) * jac(z2);
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs));
}

// ---------------------------------------------------------------------------
// Product weights

TEST(ProductWeight, Examples) {
  for (double x : {0.0, 0.3, 2.0, 9.0}) {
    EXPECT_EQ(product_weight_asymptotic(x, ProductKind::Ginibre, 1, 10), std::exp(-x));
    EXPECT_NEAR(product_weight_asymptotic(x, ProductKind::Spherical, 1, 10), std::pow(1 + x, -10.0),
                1e-15);
  }
  EXPECT_EQ(product_weight_asymptotic(0.25, ProductKind::Truncated, 2, 5), 0.0);
  EXPECT_EQ(product_weight_asymptotic(2.0, ProductKind::Truncated, 1, 5), 0.0);
  EXPECT_NEAR(product_weight_asymptotic(0.5, ProductKind::Truncated, 1, 3), 0.125, 1e-15);
}

// ---------------------------------------------------------------------------
// Density models

TEST(DensityModels, Examples) {
  const auto pg = DensityModel::product_ginibre(1, 1);
  EXPECT_NEAR(predicted_density(pg, 0.5), 1.0 / kPi, 1e-16);
  EXPECT_EQ(predicted_density(pg, 1.2), 0.0);
  EXPECT_NEAR(std::pow(support_radii(DensityModel::pseudosphere(7, 7)).outer, 2), 0.5, 1e-15);
  EXPECT_NEAR(radial_mass(DensityModel::annulus(130, 50), 0.0, INFINITY), 50.0, 1e-12);
  EXPECT_NEAR(predicted_density(DensityModel::uniform_disk(70, std::sqrt(2.0)), 1.0), 1.0 / (2.0 * kPi), 1e-16);
}

TEST(DensityModels, EveryModelIntegratesToItsMass) {
  const std::vector<DensityModel> models = {
      DensityModel::uniform_disk(37),
      DensityModel::uniform_disk(70, std::sqrt(2.0)),
      DensityModel::annulus(128, 64),
      DensityModel::sphere_projected(64, 64),
      DensityModel::sphere_projected(128, 64),
      DensityModel::pseudosphere(64, 64),
      DensityModel::pseudosphere(128, 64, 256),
      DensityModel::product_ginibre(2, 128),
      DensityModel::product_ginibre(3, 128),
      DensityModel::product_spherical(2, 64),
      DensityModel::product_spherical(3, 64),
      DensityModel::product_truncated(2, 64, 64),
      DensityModel::product_truncated(3, 100, 50),
      DensityModel{ModelKind::CseTruncExact, 20},
  };
  for (const auto& d : models) {
    const double mass = *total_mass(d);
    EXPECT_NEAR(radial_integral(d), mass, 1e-6 * mass) << model_name(d.kind) << " m=" << d.m;
    EXPECT_NEAR(radial_mass(d, 0.0, INFINITY), mass, 1e-9 * mass) << model_name(d.kind);
  }
  // The ellipse: constant density over area pi a b.
  const auto e = DensityModel::ellipse(64, 0.5);
  EXPECT_NEAR(predicted_density(e, 0.0) * kPi * 8 * 1.5 * 8 * 0.5, 64.0, 1e-12);
  EXPECT_EQ(predicted_density(e, cplx(0.0, 4.1)), 0.0);
}

TEST(DensityModels, RadialMassAgreesWithPointwiseDensity) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const auto d = DensityModel::pseudosphere(128, 64, 256);
  auto f = [&](double r) { return 2.0 * kPi * r * predicted_density(d, cplx(r, 0.0)); };
  EXPECT_NEAR(radial_mass(d, 0.6, 0.65), ts.integrate(f, 0.6, 0.65, 1e-13), 1e-10);
}

TEST(DensityModels, InvalidParameters) {
  EXPECT_THROW(predicted_density(DensityModel::annulus(3, 5), 1.0), ParameterError);
  EXPECT_THROW(predicted_density(DensityModel::ellipse(5, 1.0), 1.0), ParameterError);
  EXPECT_THROW(radial_mass(DensityModel::ellipse(5, 0.2), 0, 1), ParameterError);
}

TEST(DensityModels, SpecMapping) {
  EnsembleSpec s;
  s.family = Family::Ginibre;
  s.field = Field::Quaternion;
  s.N = 10;
  const auto d = *density_model_for(s);
  EXPECT_NEAR(support_radii(d).outer, std::sqrt(20.0), 1e-15);
  s.family = Family::SelfDual;
  s.sigma = 1 / std::sqrt(2.0);
  EXPECT_NEAR(support_radii(*density_model_for(s)).outer, std::sqrt(20.0), 1e-14);
  EXPECT_NEAR(predicted_density(*density_model_for(s), 0.0), 1.0 / (2.0 * kPi), 1e-15);
}
