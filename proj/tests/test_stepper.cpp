#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "chemo/stepper.hpp"

using namespace chemo;

namespace {

constexpr double kPi = std::numbers::pi;

SimState make_state(const ScalarField& u, const ScalarField& v, const ModelParams& p) {
  SimState s;
  s.u = u;
  s.v = v;
  s.w = solve_w(apply_g(u, p), p.delta).w;
  return s;
}

ModelParams default_params() {
  ModelParams p;
  p.chi = 1.0;
  p.xi = 1.0;
  p.delta = 1.0;
  p.K = 1.0;
  p.gamma = 1.0;
  p.alpha = 0.5;
  p.l = 1.0;
  p.n = 1;
  return p;
}

RunConfig bump_config(int n, double t_end) {
  RunConfig cfg;
  cfg.grid = GridSpec::line(n);
  cfg.params = default_params();
  cfg.u0 = ScalarField::sample(cfg.grid, [](double x, double) { return 1.0 + 0.5 * std::cos(kPi * x); });
  cfg.v0 = ScalarField::sample(cfg.grid, [](double x, double) { return 1.0 + 0.5 * std::cos(kPi * x); });
  cfg.t_end = t_end;
  cfg.output_interval = t_end / 10;
  return cfg;
}

} // namespace

TEST(StableDt, DiffusionLimitWithoutAdvection) {
  const ModelParams p = default_params();
  for (const GridSpec& g : {GridSpec::line(40), GridSpec::rect(20, 20)}) {
    const SimState s = make_state(ScalarField(g, 2.0), ScalarField(g, 1.0), p);
    const double h = g.h(0);
    EXPECT_NEAR(stable_dt(s, p, 0.4), 0.4 * h * h / (2.0 * g.dim()), 1e-18);
  }
}

TEST(StableDt, HalvingHQuartersDiffusionBound) {
  const ModelParams p = default_params();
  const GridSpec g1 = GridSpec::line(25), g2 = GridSpec::line(50);
  const double d1 = stable_dt(make_state(ScalarField(g1, 1.0), ScalarField(g1, 1.0), p), p, 0.4);
  const double d2 = stable_dt(make_state(ScalarField(g2, 1.0), ScalarField(g2, 1.0), p), p, 0.4);
  EXPECT_NEAR(d2, d1 / 4.0, 1e-15);
}

TEST(StableDt, LargerChiNeverIncreasesDt) {
  ModelParams p = default_params();
  const GridSpec g = GridSpec::line(30);
  const auto u = ScalarField::sample(g, [](double x, double) { return 1.0 + x; });
  const auto v = ScalarField::sample(g, [](double x, double) { return 40.0 * x * x; });
  double prev = std::numeric_limits<double>::infinity();
  for (double chi : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    p.chi = chi;
    const SimState s = make_state(u, v, p);
    const double dt = stable_dt(s, p, 0.4);
    EXPECT_LE(dt, prev);
    prev = dt;
  }
}

TEST(StableDt, CollapseIsBreakdown) {
  ModelParams p = default_params();
  const GridSpec g = GridSpec::line(10);
  const auto v = ScalarField::sample(g, [](double x, double) { return 1e15 * x; });
  EXPECT_THROW(stable_dt(make_state(ScalarField(g, 1.0), v, p), p, 0.4), NumericalBreakdown);
}

TEST(Step, HomogeneousReducesToOde) {
  ModelParams p = default_params();
  const double a = 2.0, b = 1.0;
  const GridSpec g = GridSpec::line(20);
  SimState s = make_state(ScalarField(g, a), ScalarField(g, b), p);
  const double dt = 5e-5;
  const int steps = 20000;
  for (int k = 0; k < steps; ++k)
    s = step(s, p, dt);
  EXPECT_NEAR(s.t, 1.0, 1e-9);
  for (double x : s.u.values())
    EXPECT_EQ(x, a);
  const double lambda = p.K * std::pow(a, p.alpha);
  const double euler = b * std::pow(1.0 - lambda * dt, steps);
  const double exact = b * std::exp(-lambda * s.t);
  for (double x : s.v.values()) {
    EXPECT_NEAR(x, euler, 1e-11 * euler);
    EXPECT_LE(std::abs(x - exact) / exact, 1e-4);
  }
  for (double x : s.w.values())
    EXPECT_NEAR(x, g_of(a, p) / p.delta, 1e-12);
}

TEST(Step, PureDiffusionDecayRate) {
  ModelParams p = default_params();
  p.chi = 0.0;
  p.xi = 0.0;
  const GridSpec g = GridSpec::line(100);
  const auto u0 = ScalarField::sample(g, [](double x, double) { return 1.0 + 0.5 * std::cos(kPi * x); });
  SimState s = make_state(u0, ScalarField(g, 0.0), p);
  const double dt = stable_dt(s, p, 0.4);
  const int steps = static_cast<int>(0.1 / dt);
  for (int k = 0; k < steps; ++k)
    s = step(s, p, dt);
  auto amplitude = [&](const ScalarField& f) {
    double c = 0.0;
    for (int i = 0; i < g.n(0); ++i)
      c += f[i] * std::cos(kPi * g.center(0, i));
    return 2.0 * c * g.h(0);
  };
  const double rate = -std::log(amplitude(s.u) / amplitude(u0)) / s.t;
  EXPECT_NEAR(rate, kPi * kPi, 0.01 * kPi * kPi);
  EXPECT_NEAR(integrate(s.u), integrate(u0), 1e-12);
}

TEST(Step, MassConservedOverManySteps) {
  const RunConfig cfg = bump_config(100, 1.0);
  SimState s = initial_state(cfg);
  const double m0 = integrate(cfg.u0);
  for (int k = 0; k < 10000; ++k)
    s = step(s, cfg.params, stable_dt(s, cfg.params, 0.4));
  EXPECT_LE(std::abs(integrate(s.u) - s.clipped_mass - m0), 1e-12 * m0);
  EXPECT_EQ(s.clipped_mass, 0.0);
}

TEST(Step, ClippingIsAccounted) {
  // A huge step drives u negative; the injected mass is recorded.
  ModelParams p = default_params();
  p.chi = 50.0;
  const GridSpec g = GridSpec::line(20);
  const auto u0 = ScalarField::sample(g, [](double x, double) { return x < 0.5 ? 1.0 : 0.01; });
  const auto v0 = ScalarField::sample(g, [](double x, double) { return 10.0 * x; });
  SimState s = make_state(u0, v0, p);
  const SimState next = step(s, p, 5e-3);
  double m_raw = 0.0;
  for (double x : next.u.values())
    EXPECT_GE(x, 0.0);
  for (double x : next.v.values())
    EXPECT_GE(x, 0.0);
  m_raw = integrate(next.u);
  EXPECT_GT(next.clipped_mass, 0.0);
  EXPECT_NEAR(m_raw - next.clipped_mass, integrate(u0), 1e-12);
}

TEST(Step, NonFiniteIsBreakdown) {
  ModelParams p = default_params();
  const GridSpec g = GridSpec::line(10);
  SimState s = make_state(ScalarField(g, 1.0), ScalarField(g, 1.0), p);
  s.v[3] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(step(s, p, 1e-4), NumericalBreakdown);
}

TEST(Step, ConstantVDecreasesMonotonically) {
  ModelParams p = default_params();
  const GridSpec g = GridSpec::line(30);
  const auto u0 = ScalarField::sample(g, [](double x, double) { return 1.0 + std::cos(kPi * x); });
  SimState s = make_state(u0, ScalarField(g, 1.0), p);
  const SimState next = step(s, p, stable_dt(s, p, 0.4));
  for (std::size_t k = 0; k < g.size(); ++k)
    EXPECT_LE(next.v[k], s.v[k]);
}

TEST(Run, HomogeneousCompletes) {
  RunConfig cfg;
  cfg.grid = GridSpec::line(50);
  cfg.params = default_params();
  cfg.u0 = ScalarField(cfg.grid, 2.0);
  cfg.v0 = ScalarField(cfg.grid, 1.0);
  cfg.t_end = 1.0;
  cfg.output_interval = 0.25;
  const RunResult rr = run(cfg);
  EXPECT_EQ(rr.termination, Termination::completed);
  ASSERT_EQ(rr.records.size(), 5u);
  EXPECT_EQ(rr.records.back().t, 1.0);
  for (const auto& r : rr.records)
    EXPECT_LE(std::abs(r.mass - 2.0), 1e-12 * 2.0);
  EXPECT_NEAR(rr.final_state.v[0], std::exp(-std::sqrt(2.0)), 1e-4 * std::exp(-std::sqrt(2.0)));
}

TEST(Run, OneDimensionalBumpStaysBounded) {
  RunConfig cfg = bump_config(100, 2.0);
  cfg.params.xi = 0.5;
  const RunResult rr = run(cfg);
  ASSERT_EQ(rr.termination, Termination::completed);
  const double m0 = integrate(cfg.u0);
  const double v0max = sup_norm(cfg.v0);
  double prev_sup_v = v0max;
  for (const auto& r : rr.records) {
    EXPECT_LE(std::abs(r.mass - r.clipped_mass - m0), 1e-12 * m0);
    EXPECT_LE(r.sup_v, v0max * (1 + 1e-10));
    EXPECT_LE(r.sup_v, prev_sup_v + 1e-10);
    EXPECT_LT(r.sup_u, 10.0 * sup_norm(cfg.u0));
    EXPECT_LE(r.clipped_mass, 1e-8 * m0);
    EXPECT_LE(r.w_residual, 1e-10);
    prev_sup_v = r.sup_v;
  }
}

TEST(Run, OutputTimesAreHit) {
  RunConfig cfg = bump_config(40, 0.3);
  cfg.output_interval = 0.1;
  const RunResult rr = run(cfg);
  ASSERT_EQ(rr.records.size(), 4u);
  for (int k = 0; k < 4; ++k)
    EXPECT_NEAR(rr.records[k].t, 0.1 * k, 1e-12);
}

TEST(Run, BlowupFlagAtUnitFactor) {
  RunConfig cfg = bump_config(50, 1.0);
  cfg.params.chi = 10.0;
  cfg.params.xi = 0.1;
  cfg.blowup_factor = 1.0;
  const RunResult rr = run(cfg);
  EXPECT_EQ(rr.termination, Termination::blowup_flagged);
  EXPECT_GT(rr.records.back().sup_u, sup_norm(cfg.u0));
  // every earlier record stayed at or below the initial maximum
  for (std::size_t k = 0; k + 1 < rr.records.size(); ++k)
    EXPECT_LE(rr.records[k].sup_u, sup_norm(cfg.u0));
}

TEST(Run, UpwindModeConservesMass) {
  RunConfig cfg = bump_config(60, 0.5);
  cfg.positivity = PositivityMode::upwind;
  cfg.params.chi = 5.0;
  const RunResult rr = run(cfg);
  ASSERT_EQ(rr.termination, Termination::completed);
  const double m0 = integrate(cfg.u0);
  for (const auto& r : rr.records)
    EXPECT_LE(std::abs(r.mass - r.clipped_mass - m0), 1e-12 * m0);
}

TEST(Run, TwoDimensionalShortRun) {
  RunConfig cfg;
  cfg.grid = GridSpec::rect(16, 16);
  cfg.params = default_params();
  cfg.params.n = 2;
  cfg.u0 = ScalarField::sample(cfg.grid, [](double x, double y) {
    return 1.0 + std::exp(-((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)) / 0.02);
  });
  cfg.v0 = ScalarField(cfg.grid, 1.0);
  cfg.t_end = 0.05;
  cfg.output_interval = 0.01;
  const RunResult rr = run(cfg);
  ASSERT_EQ(rr.termination, Termination::completed);
  const double m0 = integrate(cfg.u0);
  for (const auto& r : rr.records)
    EXPECT_LE(std::abs(r.mass - m0), 1e-12 * m0);
}

TEST(Run, InvalidConfigThrows) {
  RunConfig cfg = bump_config(20, 1.0);
  cfg.u0 = ScalarField(cfg.grid, 0.0);
  EXPECT_THROW(run(cfg), std::invalid_argument);
  cfg = bump_config(20, 1.0);
  cfg.v0[2] = -1.0;
  EXPECT_THROW(run(cfg), std::invalid_argument);
}
