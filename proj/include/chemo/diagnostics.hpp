#ifndef CHEMO_DIAGNOSTICS_HPP
#define CHEMO_DIAGNOSTICS_HPP

#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "chemo/grid.hpp"
#include "chemo/state.hpp"

namespace chemo {

struct DiagRecord {
  double t = 0.0;
  double mass = 0.0;
  double sup_u = 0.0;
  double sup_v = 0.0;
  double sup_w = 0.0;
  double lp_u = 0.0;
  double grad_v_sq = 0.0;
  double y_p = 0.0;
  double dt_current = 0.0;
  double clipped_mass = 0.0;
  double w_residual = 0.0;
};

/// y(t) = int u^p + (chi^2/gamma)^p int |grad v|^(2p), with |grad v| taken
/// cell-wise from central differences.
inline double y_functional(const ScalarField& u, const ScalarField& v, double p, double chi,
                           double gamma) {
  if (!(p > 1.0))
    throw std::invalid_argument("y_functional requires p > 1");
  require_same_grid(u, v);
  const ScalarField gv = grad_magnitude(v);
  double su = 0.0, sg = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    su += std::pow(std::abs(u[k]), p);
    sg += std::pow(gv[k], 2.0 * p);
  }
  const double vol = u.spec().cell_volume();
  return su * vol + std::pow(chi * chi / gamma, p) * sg * vol;
}

inline DiagRecord record(const SimState& s, const RunConfig& cfg, double dt_current = 0.0) {
  DiagRecord r;
  r.t = s.t;
  r.mass = integrate(s.u);
  r.sup_u = sup_norm(s.u);
  r.sup_v = sup_norm(s.v);
  r.sup_w = sup_norm(s.w);
  r.lp_u = lp_norm(s.u, cfg.p_diag);
  r.grad_v_sq = grad_sq_integral(s.v);
  r.y_p = y_functional(s.u, s.v, cfg.p_diag, cfg.params.chi, cfg.params.gamma);
  r.dt_current = dt_current;
  r.clipped_mass = s.clipped_mass;
  r.w_residual = s.w_residual;
  return r;
}

inline constexpr const char* kDiagColumns =
    "t,mass,sup_u,sup_v,sup_w,lp_u,grad_v_sq,y_p,dt_current,clipped_mass,w_residual";

/// Writes comment lines "# key = value" for each metadata pair, then the header row.
inline void write_csv_header(std::ostream& os,
                             const std::vector<std::pair<std::string, std::string>>& meta = {}) {
  for (const auto& [k, v] : meta)
    os << "# " << k << " = " << v << '\n';
  os << kDiagColumns << '\n';
}

inline void write_csv_row(std::ostream& os, const DiagRecord& r) {
  const auto old = os.precision(17);
  os << r.t << ',' << r.mass << ',' << r.sup_u << ',' << r.sup_v << ',' << r.sup_w << ','
     << r.lp_u << ',' << r.grad_v_sq << ',' << r.y_p << ',' << r.dt_current << ','
     << r.clipped_mass << ',' << r.w_residual << '\n';
  os.precision(old);
}

} // namespace chemo

#endif // CHEMO_DIAGNOSTICS_HPP
