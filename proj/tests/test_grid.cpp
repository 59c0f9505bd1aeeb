#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "chemo/grid.hpp"

using namespace chemo;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField random_field(const GridSpec& g, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  ScalarField f(g);
  for (double& x : f.values())
    x = dist(rng);
  return f;
}

double sum_abs(const ScalarField& f) {
  double s = 0.0;
  for (double x : f.values())
    s += std::abs(x);
  return s;
}

} // namespace

TEST(GridSpec, RejectsBadShapes) {
  EXPECT_THROW(GridSpec::line(2), std::invalid_argument);
  EXPECT_THROW(GridSpec::line(10, 0.0), std::invalid_argument);
  EXPECT_THROW(GridSpec(3, {4, 4}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(GridSpec::rect(4, 2), std::invalid_argument);
}

TEST(GridSpec, SpacingAndCounts) {
  const GridSpec g = GridSpec::rect(8, 5, 2.0, 1.0);
  EXPECT_EQ(g.size(), 40u);
  EXPECT_DOUBLE_EQ(g.h(0), 0.25);
  EXPECT_DOUBLE_EQ(g.h(1), 0.2);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 0.05);
  EXPECT_EQ(g.index(1, 0), 5u);
}

TEST(ScalarField, SizeMismatchThrows) {
  EXPECT_THROW(ScalarField(GridSpec::line(4), std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST(Integrate, ConstantAndZero) {
  const GridSpec g = GridSpec::line(10);
  EXPECT_NEAR(integrate(ScalarField(g, 1.0)), 1.0, 1e-15);
  EXPECT_EQ(integrate(ScalarField(g, 0.0)), 0.0);
}

TEST(Integrate, MidpointExactForLinear) {
  const GridSpec g = GridSpec::line(4);
  const auto f = ScalarField::sample(g, [](double x, double) { return x; });
  EXPECT_DOUBLE_EQ(integrate(f), 0.5);
}

TEST(Laplacian, ConstantGivesZero) {
  const GridSpec g = GridSpec::rect(6, 7);
  const ScalarField out = laplacian_neumann(ScalarField(g, 3.5));
  for (double x : out.values())
    EXPECT_EQ(x, 0.0);
}

TEST(Laplacian, CosineEigenfunction) {
  const int n = 200;
  const GridSpec g = GridSpec::line(n);
  const auto f = ScalarField::sample(g, [](double x, double) { return std::cos(kPi * x); });
  const ScalarField lap = laplacian_neumann(f);
  double max_err = 0.0;
  for (int i = 0; i < n; ++i)
    max_err = std::max(max_err, std::abs(lap[i] + kPi * kPi * f[i]));
  const double h = g.h(0);
  EXPECT_LE(max_err, 5.0 * h * h * std::pow(kPi, 4));
}

TEST(Laplacian, SecondOrderUnderDoubling) {
  // cos(k pi x / L) with k = 2, L = 2: Neumann eigenfunction with eigenvalue (k pi / L)^2.
  const double L = 2.0, k = 2.0;
  const double lam = (k * kPi / L) * (k * kPi / L);
  std::vector<double> errs;
  for (int n : {50, 100, 200}) {
    const GridSpec g = GridSpec::line(n, L);
    const auto f = ScalarField::sample(g, [&](double x, double) { return std::cos(k * kPi * x / L); });
    const ScalarField lap = laplacian_neumann(f);
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      e = std::max(e, std::abs(lap[i] + lam * f[i]));
    errs.push_back(e);
  }
  for (std::size_t j = 1; j < errs.size(); ++j) {
    const double order = std::log2(errs[j - 1] / errs[j]);
    EXPECT_GE(order, 1.9);
    EXPECT_LE(order, 2.1);
  }
}

TEST(Laplacian, IntegratesToZeroOnRandomFields) {
  std::mt19937 rng(7);
  for (const GridSpec& g : {GridSpec::line(37, 3.0), GridSpec::rect(13, 9, 1.0, 2.5)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const ScalarField lap = laplacian_neumann(random_field(g, rng));
      EXPECT_LE(std::abs(integrate(lap)), 1e-12 * sum_abs(lap) * g.cell_volume());
    }
  }
}

TEST(DivUGradPhi, ConstantPhiGivesZero) {
  std::mt19937 rng(1);
  const GridSpec g = GridSpec::rect(5, 6);
  const ScalarField out = div_u_grad_phi(random_field(g, rng), ScalarField(g, 2.0));
  for (double x : out.values())
    EXPECT_EQ(x, 0.0);
}

TEST(DivUGradPhi, UnitDensityMatchesLaplacianBitwise) {
  std::mt19937 rng(2);
  for (const GridSpec& g : {GridSpec::line(17), GridSpec::rect(9, 11)}) {
    const ScalarField phi = random_field(g, rng);
    EXPECT_EQ(div_u_grad_phi(ScalarField(g, 1.0), phi), laplacian_neumann(phi));
  }
}

TEST(DivUGradPhi, ConstantDensityScalesLaplacian) {
  std::mt19937 rng(3);
  const GridSpec g = GridSpec::rect(10, 8);
  const double c = 2.75;
  const ScalarField phi = random_field(g, rng);
  const ScalarField out = div_u_grad_phi(ScalarField(g, c), phi);
  const ScalarField lap = laplacian_neumann(phi);
  // rounding scale: the face fluxes being summed, not their difference
  const double scale = c * sup_norm(phi) * 4.0 * (1.0 / (g.h(0) * g.h(0)) + 1.0 / (g.h(1) * g.h(1)));
  for (std::size_t k = 0; k < out.size(); ++k)
    EXPECT_NEAR(out[k], c * lap[k], 1e-14 * scale);
}

TEST(DivUGradPhi, ConservativeForBothSchemes) {
  std::mt19937 rng(4);
  for (auto scheme : {FluxScheme::central, FluxScheme::upwind})
    for (const GridSpec& g : {GridSpec::line(41), GridSpec::rect(12, 15)})
      for (int trial = 0; trial < 10; ++trial) {
        const ScalarField out =
            div_u_grad_phi(random_field(g, rng, 0.0, 2.0), random_field(g, rng), scheme);
        EXPECT_LE(std::abs(integrate(out)), 1e-12 * sum_abs(out) * g.cell_volume());
      }
}

TEST(DivUGradPhi, UpwindTakesDonorCell) {
  // phi increasing: velocity +x, so each face carries the left cell's density.
  const GridSpec g = GridSpec::line(3, 3.0);
  const ScalarField u(g, std::vector<double>{1.0, 2.0, 4.0});
  const ScalarField phi(g, std::vector<double>{0.0, 1.0, 2.0});
  const ScalarField out = div_u_grad_phi(u, phi, FluxScheme::upwind);
  EXPECT_DOUBLE_EQ(out[0], 1.0);
  EXPECT_DOUBLE_EQ(out[1], 2.0 - 1.0);
  EXPECT_DOUBLE_EQ(out[2], -2.0);
}

TEST(DivUGradPhi, GridMismatchThrows) {
  EXPECT_THROW(div_u_grad_phi(ScalarField(GridSpec::line(4)), ScalarField(GridSpec::line(5))),
               std::invalid_argument);
}

TEST(GradSqIntegral, Basics) {
  const GridSpec g = GridSpec::line(16);
  EXPECT_EQ(grad_sq_integral(ScalarField(g, 4.0)), 0.0);
  const auto f = ScalarField::sample(g, [](double x, double) { return x; });
  // N - 1 interior faces, each (1)^2 * h.
  EXPECT_NEAR(grad_sq_integral(f), 15.0 / 16.0, 1e-14);
  for (int n : {8, 16, 64, 256}) {
    const GridSpec gn = GridSpec::line(n);
    const auto fn = ScalarField::sample(gn, [](double x, double) { return x; });
    EXPECT_LE(std::abs(grad_sq_integral(fn) - 1.0), 2.0 / n);
  }
}

TEST(GradSqIntegral, QuadraticHomogeneity) {
  std::mt19937 rng(5);
  const GridSpec g = GridSpec::rect(7, 9);
  const ScalarField f = random_field(g, rng);
  ScalarField cf = f;
  for (double& x : cf.values())
    x *= -3.0;
  EXPECT_NEAR(grad_sq_integral(cf), 9.0 * grad_sq_integral(f), 1e-12 * grad_sq_integral(cf));
}

TEST(Norms, Basics) {
  const GridSpec g = GridSpec::line(5);
  for (double p : {1.0, 1.5, 2.0, 7.0})
    EXPECT_NEAR(lp_norm(ScalarField(g, -2.5), p), 2.5, 1e-14);
  const GridSpec g3 = GridSpec::line(3);
  EXPECT_EQ(sup_norm(ScalarField(g3, std::vector<double>{-3.0, 2.0, 0.0})), 3.0);
  EXPECT_THROW(lp_norm(ScalarField(g, 1.0), 0.5), std::invalid_argument);

  std::mt19937 rng(6);
  const ScalarField f = random_field(GridSpec::rect(8, 8), rng);
  ScalarField f2 = f;
  for (double& x : f2.values())
    x *= x;
  const double l2 = lp_norm(f, 2.0);
  EXPECT_NEAR(l2 * l2, integrate(f2), 1e-12 * integrate(f2));
}

TEST(Operators, Deterministic) {
  std::mt19937 rng(8);
  const GridSpec g = GridSpec::rect(11, 6);
  const ScalarField u = random_field(g, rng, 0.0, 1.0), phi = random_field(g, rng);
  EXPECT_EQ(div_u_grad_phi(u, phi), div_u_grad_phi(u, phi));
  EXPECT_EQ(laplacian_neumann(phi), laplacian_neumann(phi));
  EXPECT_EQ(grad_sq_integral(phi), grad_sq_integral(phi));
}

TEST(Snapshot, RoundTrip) {
  std::mt19937 rng(9);
  for (const GridSpec& g : {GridSpec::line(7, 2.0), GridSpec::rect(4, 5, 1.5, 0.5)}) {
    const ScalarField f = random_field(g, rng);
    std::stringstream ss;
    write_snapshot(ss, f, 0.125);
    const Snapshot back = read_snapshot(ss);
    EXPECT_EQ(back.time, 0.125);
    EXPECT_EQ(back.field, f);
  }
}

TEST(Snapshot, HeaderLayout) {
  std::stringstream ss;
  write_snapshot(ss, ScalarField(GridSpec::rect(3, 4, 1.0, 2.0), 1.0), 0.5);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "dim 2");
  std::getline(ss, line);
  EXPECT_EQ(line, "n_cells 3 4");
  std::getline(ss, line);
  EXPECT_EQ(line, "length 1 2");
  std::getline(ss, line);
  EXPECT_EQ(line, "time 0.5");
}
