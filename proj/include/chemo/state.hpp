#ifndef CHEMO_STATE_HPP
#define CHEMO_STATE_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemo/elliptic.hpp"
#include "chemo/grid.hpp"
#include "chemo/kinetics.hpp"

namespace chemo {

/// Snapshot of the evolving system. w is slaved to u through the elliptic
/// equation and is recomputed after every update of u.
struct SimState {
  ScalarField u;
  ScalarField v;
  ScalarField w;
  double t = 0.0;
  long step = 0;
  double clipped_mass = 0.0; // mass injected by zeroing negative u, >= 0
  double w_residual = 0.0;
  // Earlier w levels, newest first (2D only); they seed the next elliptic solve.
  std::vector<ScalarField> w_hist;
};

enum class PositivityMode { clip, upwind };

inline const char* to_string(PositivityMode m) {
  return m == PositivityMode::clip ? "clip" : "upwind";
}

/// p for the y-functional: 2 up to n = 3, otherwise n/2 + 1/2 so that p > n/2.
inline double default_p_diag(int n) { return n <= 3 ? 2.0 : n / 2.0 + 0.5; }

struct RunConfig {
  GridSpec grid;
  ModelParams params;
  ScalarField u0;
  ScalarField v0;
  double t_end = 1.0;
  double dt_safety = 0.4;
  double output_interval = 0.1;
  PositivityMode positivity = PositivityMode::clip;
  double blowup_factor = 1e3;
  double p_diag = 2.0;
  EllipticOptions elliptic;

  void validate() const {
    params.validate();
    if (!(u0.spec() == grid) || !(v0.spec() == grid))
      throw std::invalid_argument("initial fields do not match the grid");
    double mass = 0.0;
    for (std::size_t k = 0; k < u0.size(); ++k) {
      if (!(u0[k] >= 0.0) || !(v0[k] >= 0.0) || !std::isfinite(u0[k]) || !std::isfinite(v0[k]))
        throw std::invalid_argument("initial data must be finite and nonnegative");
      mass += u0[k];
    }
    if (!(mass > 0.0))
      throw std::invalid_argument("initial cell density u0 is identically zero");
    if (!(t_end > 0.0))
      throw std::invalid_argument("run.t_end must be positive");
    if (!(dt_safety > 0.0 && dt_safety <= 1.0))
      throw std::invalid_argument("run.dt_safety must lie in (0, 1]");
    if (!(output_interval > 0.0))
      throw std::invalid_argument("run.output_interval must be positive");
    if (!(blowup_factor >= 1.0))
      throw std::invalid_argument("run.blowup_factor must be >= 1");
    if (!(p_diag > 1.0))
      throw std::invalid_argument("run.p_diag must exceed 1");
  }
};

/// Non-finite values or a collapsed time step.
class NumericalBreakdown : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace chemo

#endif // CHEMO_STATE_HPP
