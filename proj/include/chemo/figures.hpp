#ifndef CHEMO_FIGURES_HPP
#define CHEMO_FIGURES_HPP

// Tabulated threshold curves (s, C_mu, C_xi) and threshold tables as CSV.

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemo/theory.hpp"

namespace chemo::figures {

enum class Variant { fig1, fig2 };

struct CurvePoint {
  double s = 0.0;
  double c_mu = 0.0;
  double c_xi = 0.0;
};

/// `samples` equally spaced points on [0, s_max(n)], endpoints included.
/// fig1 uses the general C_mu formula and C(n) s^(4/n); fig2 the p = n/2 curves.
inline std::vector<CurvePoint> curve(Variant v, int n, int samples) {
  if (samples < 2)
    throw std::invalid_argument("need at least 2 samples");
  const double s_max = v == Variant::fig1 ? theory::fig1_domain_max(n) : theory::fig2_domain_max(n);
  std::vector<CurvePoint> out;
  out.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double s = s_max * k / (samples - 1);
    if (v == Variant::fig1) {
      out.push_back({s, theory::C_mu(s, n), theory::C_xi(s, n)});
    } else {
      const auto c = theory::halfp_curves(n, s);
      out.push_back({s, c.c_mu_half, c.c_xi_half});
    }
  }
  return out;
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& pts) {
  const auto old = os.precision(17);
  os << "s,C_mu,C_xi\n";
  for (const auto& p : pts)
    os << p.s << ',' << p.c_mu << ',' << p.c_xi << '\n';
  os.precision(old);
}

inline void write_rho0_csv(std::ostream& os) {
  const auto old = os.precision(17);
  os << "n,rho0,C_xi_at_rho0\n";
  for (int n = 3; n <= 6; ++n) {
    const double r = theory::rho0(n);
    os << n << ',' << r << ',' << theory::halfp_curves(n, r).c_xi_half << '\n';
  }
  os.precision(old);
}

struct ThresholdRow {
  int n = 1;
  double p = 2.0;
  double s = 0.0;
  double tilde_C = 0.0;
  double xi_star = 0.0;
  double big_C = 0.0;
  double theorem_xi = 0.0; // C(n) s^(4/n)
};

inline std::vector<ThresholdRow> threshold_table(const std::vector<int>& ns,
                                                 const std::vector<double>& ps,
                                                 const std::vector<double>& ss) {
  std::vector<ThresholdRow> rows;
  for (int n : ns)
    for (double p : ps)
      for (double s : ss) {
        ThresholdRow r;
        r.n = n;
        r.p = p;
        r.s = s;
        r.tilde_C = theory::tilde_C(p, n);
        r.xi_star = theory::xi_threshold(p, n, s);
        r.big_C = theory::big_C(n);
        r.theorem_xi = n >= 3 ? theory::C_xi(s, n) : 0.0;
        rows.push_back(r);
      }
  return rows;
}

inline void write_threshold_csv(std::ostream& os, const std::vector<ThresholdRow>& rows) {
  const auto old = os.precision(17);
  os << "n,p,s,tilde_C,xi_star,big_C,theorem_xi\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.p << ',' << r.s << ',' << r.tilde_C << ',' << r.xi_star << ','
       << r.big_C << ',' << r.theorem_xi << '\n';
  os.precision(old);
}

} // namespace chemo::figures

#endif // CHEMO_FIGURES_HPP
