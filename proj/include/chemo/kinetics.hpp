#ifndef CHEMO_KINETICS_HPP
#define CHEMO_KINETICS_HPP

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemo/grid.hpp"
#include "chemo/theory.hpp"

namespace chemo {

/// Coefficients of
///   u_t = Lap u - chi div(u grad v) + xi div(u grad w)
///   v_t = Lap v - f(u) v
///   0   = Lap w - delta w + g(u)
/// with f(s) = K s^alpha and g(s) = gamma s (s+1)^(l-1).
struct ModelParams {
  double chi = 1.0;
  double xi = 1.0;
  double delta = 1.0;
  double K = 1.0;
  double gamma = 1.0;
  double alpha = 0.5;
  double l = 1.0;
  int n = 1; // ambient dimension used for the theory checks

  void validate() const {
    auto positive = [](double x, const char* name) {
      if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string("params.") + name + " must be positive");
    };
    positive(chi, "chi");
    positive(xi, "xi");
    positive(delta, "delta");
    positive(K, "K");
    positive(gamma, "gamma");
    positive(alpha, "alpha");
    if (!(l >= 1.0) || !std::isfinite(l))
      throw std::invalid_argument("params.l must be >= 1");
    if (n < 1)
      throw std::invalid_argument("params.n must be >= 1");
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Consumption rate K s^alpha.
inline double f_of(double s, const ModelParams& p) {
  if (s < 0.0)
    throw std::domain_error("f_of: negative argument");
  if (s == 0.0)
    return 0.0;
  return p.K * std::pow(s, p.alpha);
}

/// Production rate gamma s (s+1)^(l-1).
inline double g_of(double s, const ModelParams& p) {
  if (s < 0.0)
    throw std::domain_error("g_of: negative argument");
  if (p.l == 1.0)
    return p.gamma * s;
  return p.gamma * s * std::pow(s + 1.0, p.l - 1.0);
}

inline ScalarField apply_g(const ScalarField& u, const ModelParams& p) {
  ScalarField out(u.spec());
  for (std::size_t k = 0; k < u.size(); ++k)
    out[k] = g_of(u[k], p);
  return out;
}

/// Which boundedness statement (if any) covers a parameter set.
struct HypothesisReport {
  int n = 1;
  theory::OpenInterval alpha_range;
  bool alpha_ok = false;
  bool linear_production = true; // l == 1
  bool needs_xi_threshold = false;
  double xi_threshold = 0.0;      // C(n) s^(4/n), zero when not needed
  double s = 0.0;                 // ||chi v0||_inf
  bool xi_ok = true;
  std::vector<std::string> warnings;

  bool covered() const { return alpha_ok && xi_ok; }
};

inline std::string format_interval(const theory::OpenInterval& r) {
  std::ostringstream os;
  os.precision(6);
  os << '(' << r.lo << ", " << r.hi << ')';
  return os.str();
}

/// Upper end of the admissible alpha range as a reduced fraction.
inline std::string alpha_bound_label(int n) {
  if (n <= 2)
    return "1";
  const int num = n + 2, den = 2 * n, d = std::gcd(num, den);
  return std::to_string(num / d) + "/" + std::to_string(den / d);
}

/// Advisory check of the theorem hypotheses; never throws on failure.
/// s is ||chi v0||_inf.
inline HypothesisReport validate_hypotheses(const ModelParams& p, double s = 0.0) {
  HypothesisReport r;
  r.n = p.n;
  r.s = s;
  r.alpha_range = theory::alpha_admissible_range(std::max(p.n, 1));
  r.alpha_ok = r.alpha_range.contains(p.alpha);
  r.linear_production = p.l == 1.0;
  if (!r.alpha_ok)
    r.warnings.push_back("alpha outside (0, " + alpha_bound_label(p.n) + ")");
  if (r.linear_production && p.n >= 3) {
    r.needs_xi_threshold = true;
    r.xi_threshold = theory::big_C(p.n) * std::pow(s, 4.0 / p.n);
    r.xi_ok = p.xi > r.xi_threshold;
    if (!r.xi_ok) {
      std::ostringstream os;
      os.precision(10);
      os << "xi = " << p.xi << " does not exceed C(n) ||chi v0||^(4/n) = " << r.xi_threshold;
      r.warnings.push_back(os.str());
    }
  }
  return r;
}

} // namespace chemo

#endif // CHEMO_KINETICS_HPP
