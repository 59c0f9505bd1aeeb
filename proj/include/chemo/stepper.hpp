#ifndef CHEMO_STEPPER_HPP
#define CHEMO_STEPPER_HPP

// Explicit Euler time stepping for (u, v) with w re-solved after each update.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "chemo/diagnostics.hpp"
#include "chemo/elliptic.hpp"
#include "chemo/grid.hpp"
#include "chemo/kinetics.hpp"
#include "chemo/state.hpp"

namespace chemo {

/// Additive source terms evaluated at the start of a step (time t). Used by
/// manufactured-solution checks; empty functions mean no forcing.
struct Forcing {
  std::function<void(double t, ScalarField& fu)> u;
  std::function<void(double t, ScalarField& fv)> v;
};

inline constexpr double kMinDt = 1e-12;

/// chi v - xi w: cells drift with velocity grad of this potential.
inline ScalarField taxis_potential(const SimState& s, const ModelParams& p) {
  ScalarField psi(s.u.spec());
  for (std::size_t k = 0; k < psi.size(); ++k)
    psi[k] = p.chi * s.v[k] - p.xi * s.w[k];
  return psi;
}

/// dt_safety * min(diffusive bound, advective CFL bound). The diffusive bound
/// is 1 / (2 sum_i h_i^-2), i.e. h^2 / (2 dim) on square cells.
inline double stable_dt(const SimState& s, const ModelParams& p, double dt_safety) {
  const GridSpec& g = s.u.spec();
  double inv_h2 = 0.0;
  for (int a = 0; a < g.dim(); ++a)
    inv_h2 += 1.0 / (g.h(a) * g.h(a));
  const double dt_diff = 1.0 / (2.0 * inv_h2);

  const ScalarField psi = taxis_potential(s, p);
  double dt_adv = std::numeric_limits<double>::infinity();
  detail::for_each_face(g, [&](std::size_t l, std::size_t r, int axis) {
    const double speed = std::abs(psi[r] - psi[l]) / g.h(axis);
    if (speed > 0.0)
      dt_adv = std::min(dt_adv, g.h(axis) / speed);
  });
  const double dt = dt_safety * std::min(dt_diff, dt_adv);
  if (!(dt >= kMinDt))
    throw NumericalBreakdown("time step collapsed below 1e-12");
  return dt;
}

struct StepOptions {
  PositivityMode positivity = PositivityMode::clip;
  EllipticOptions elliptic;
  const Forcing* forcing = nullptr;
};

/// Earlier levels of w kept for the initial iterate of the next 2D solve.
inline constexpr std::size_t kWHistory = 3;

/// Starting iterate for the w solve: the energy-norm projection onto the
/// current and earlier w levels. The span contains every polynomial
/// extrapolation in time, and unlike fixed extrapolation weights the
/// projection does not amplify the solver's own leftover error.
inline ScalarField initial_w_guess(const SimState& s, const ScalarField& source, double delta) {
  std::vector<ScalarField> levels{s.w};
  levels.insert(levels.end(), s.w_hist.begin(), s.w_hist.end());
  return projected_guess(source, delta, difference_basis(std::move(levels)));
}

/// One explicit Euler step. u and v use the pre-step fields; w is re-solved
/// from the updated u, starting from initial_w_guess in 2D.
inline SimState step(const SimState& s, const ModelParams& p, double dt,
                     const StepOptions& opts = {}) {
  const GridSpec& g = s.u.spec();
  const FluxScheme scheme =
      opts.positivity == PositivityMode::upwind ? FluxScheme::upwind : FluxScheme::central;

  const ScalarField lap_u = laplacian_neumann(s.u);
  const ScalarField taxis = div_u_grad_phi(s.u, taxis_potential(s, p), scheme);
  const ScalarField lap_v = laplacian_neumann(s.v);

  ScalarField fu(g), fv(g);
  if (opts.forcing && opts.forcing->u)
    opts.forcing->u(s.t, fu);
  if (opts.forcing && opts.forcing->v)
    opts.forcing->v(s.t, fv);

  SimState next;
  next.u = ScalarField(g);
  next.v = ScalarField(g);
  next.clipped_mass = s.clipped_mass;
  const double vol = g.cell_volume();
  for (std::size_t k = 0; k < g.size(); ++k) {
    double u = s.u[k] + dt * (lap_u[k] - taxis[k] + fu[k]);
    double v = s.v[k] + dt * (lap_v[k] - f_of(s.u[k], p) * s.v[k] + fv[k]);
    if (!std::isfinite(u) || !std::isfinite(v))
      throw NumericalBreakdown("non-finite value at step " + std::to_string(s.step + 1));
    if (u < 0.0) {
      next.clipped_mass += -u * vol;
      u = 0.0;
    }
    next.u[k] = u;
    next.v[k] = std::max(v, 0.0);
  }

  const bool iterative = g.dim() == 2;
  const ScalarField source = apply_g(next.u, p);
  EllipticResult ws = solve_w(source, p.delta, opts.elliptic,
                              iterative ? initial_w_guess(s, source, p.delta) : s.w);
  next.w = std::move(ws.w);
  next.w_residual = ws.residual;
  if (iterative) {
    next.w_hist.push_back(s.w);
    for (std::size_t m = 0; m + 1 < kWHistory && m < s.w_hist.size(); ++m)
      next.w_hist.push_back(s.w_hist[m]);
  }
  next.t = s.t + dt;
  next.step = s.step + 1;
  return next;
}

/// Builds the t = 0 state: w solved from g(u0).
inline SimState initial_state(const RunConfig& cfg) {
  SimState s;
  s.u = cfg.u0;
  s.v = cfg.v0;
  EllipticResult ws = solve_w(apply_g(s.u, cfg.params), cfg.params.delta, cfg.elliptic);
  s.w = std::move(ws.w);
  s.w_residual = ws.residual;
  return s;
}

enum class Termination { completed, blowup_flagged, breakdown };

inline const char* to_string(Termination t) {
  switch (t) {
  case Termination::completed: return "completed";
  case Termination::blowup_flagged: return "blowup_flagged";
  case Termination::breakdown: return "breakdown";
  }
  return "unknown";
}

struct RunResult {
  std::vector<DiagRecord> records;
  SimState final_state;
  Termination termination = Termination::completed;
  std::string message;
};

/// Called for every emitted record with the state it was taken from.
using RunObserver = std::function<void(const SimState&, const DiagRecord&)>;

/// Adaptive explicit run to cfg.t_end. Records are emitted at t = 0, at every
/// multiple of output_interval, at t_end, and at the step that trips the
/// blow-up flag (sup u > blowup_factor * sup u0).
inline RunResult run(const RunConfig& cfg, const RunObserver& observer = {},
                     const Forcing* forcing = nullptr) {
  cfg.validate();
  RunResult res;
  StepOptions opts{cfg.positivity, cfg.elliptic, forcing};

  auto emit = [&](const SimState& s, double dt) {
    res.records.push_back(record(s, cfg, dt));
    if (observer)
      observer(s, res.records.back());
  };

  SimState s;
  try {
    s = initial_state(cfg);
  } catch (const std::exception& e) {
    res.termination = Termination::breakdown;
    res.message = e.what();
    return res;
  }
  emit(s, 0.0);

  const double sup_u0 = sup_norm(cfg.u0);
  const double t_eps = 1e-12 * std::max(1.0, cfg.t_end);
  long next_out = 1;
  double dt = 0.0;
  try {
    while (s.t < cfg.t_end - t_eps) {
      const double t_out = std::min(next_out * cfg.output_interval, cfg.t_end);
      dt = stable_dt(s, cfg.params, cfg.dt_safety);
      if (s.t + dt > t_out - t_eps)
        dt = t_out - s.t;
      s = step(s, cfg.params, dt, opts);
      if (s.t >= t_out - t_eps)
        s.t = t_out;

      if (sup_norm(s.u) > cfg.blowup_factor * sup_u0) {
        emit(s, dt);
        res.termination = Termination::blowup_flagged;
        res.message = "sup u exceeded blowup_factor * sup u0";
        res.final_state = std::move(s);
        return res;
      }
      if (s.t == t_out) {
        emit(s, dt);
        while (next_out * cfg.output_interval <= s.t + t_eps)
          ++next_out;
      }
    }
  } catch (const std::exception& e) {
    res.termination = Termination::breakdown;
    res.message = e.what();
    res.final_state = std::move(s);
    return res;
  }
  res.final_state = std::move(s);
  return res;
}

} // namespace chemo

#endif // CHEMO_STEPPER_HPP
