#ifndef CHEMO_THEORY_HPP
#define CHEMO_THEORY_HPP

// Closed-form constants, interpolation exponents and threshold curves of the
// boundedness theory for the attraction-repulsion consumption model.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace chemo::theory {

/// Open interval (lo, hi); hi may be +inf.
struct OpenInterval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
};

/// C~(p, n): vanishes for n <= 2, otherwise
/// 2^p p^(2p+1) (p-1) (4p^2+n) / (p+1)^(p+1), evaluated in log space.
inline double tilde_C(double p, int n) {
  if (!(p > 1.0))
    throw std::invalid_argument("tilde_C requires p > 1");
  if (n < 1)
    throw std::invalid_argument("tilde_C requires n >= 1");
  if (n <= 2)
    return 0.0;
  const double log_val = p * std::log(2.0) + (2.0 * p + 1.0) * std::log(p) + std::log(p - 1.0) +
                         std::log(4.0 * p * p + n) - (p + 1.0) * std::log(p + 1.0);
  return std::exp(log_val);
}

/// Lower bound on xi that makes the p-th moment functional absorptive:
/// (4 C~(p,n) s^2 / p)^(1/p) with s = ||chi v0||_inf.
inline double xi_threshold(double p, int n, double s) {
  if (!(p > 1.0))
    throw std::invalid_argument("xi_threshold requires p > 1");
  if (s < 0.0)
    throw std::invalid_argument("xi_threshold requires s >= 0");
  const double c = tilde_C(p, n);
  if (c == 0.0 || s == 0.0)
    return 0.0;
  // (4 c s^2 / p)^(1/p) = exp((log(4c/p) + 2 log s) / p)
  return std::exp((std::log(4.0 * c / p) + 2.0 * std::log(s)) / p);
}

/// C(n) = ((8/n) C~(n/2, n))^(2/n) for n >= 3, zero otherwise.
inline double big_C(int n) {
  if (n < 1)
    throw std::invalid_argument("big_C requires n >= 1");
  if (n <= 2)
    return 0.0;
  const double p = n / 2.0;
  return std::pow(8.0 / n * tilde_C(p, n), 2.0 / n);
}

/// Admissible moment exponents (max{l, l(nl-2)/n}, inf) for production exponent l.
inline OpenInterval p_admissible_range(double l, int n) {
  if (!(l >= 1.0) || n < 1)
    throw std::invalid_argument("p_admissible_range requires l >= 1, n >= 1");
  return {std::max(l, l * (n * l - 2.0) / n), std::numeric_limits<double>::infinity()};
}

/// Admissible consumption exponents (0, 1/2 + 1/n) intersected with (0, 1).
inline OpenInterval alpha_admissible_range(int n) {
  if (n < 1)
    throw std::invalid_argument("alpha_admissible_range requires n >= 1");
  return {0.0, std::min(0.5 + 1.0 / n, 1.0)};
}

/// Gagliardo-Nirenberg exponent for the production term, l > 1.
inline double gn_theta1(double l, int n, double p) {
  if (!(l > 1.0))
    throw std::invalid_argument("gn_theta1 requires l > 1");
  if (!p_admissible_range(l, n).contains(p))
    throw std::invalid_argument("gn_theta1: p outside admissible range");
  return (1.0 - 1.0 / l) / (1.0 + 2.0 / (n * p) - 1.0 / p);
}

/// Gagliardo-Nirenberg exponent for the L^p bound, p > max(1, n/2).
inline double gn_theta(int n, double p) {
  if (n < 1 || !(p > std::max(1.0, n / 2.0)))
    throw std::invalid_argument("gn_theta requires n >= 1 and p > max(1, n/2)");
  const double a = n * p / 2.0 * (1.0 - 1.0 / p);
  return a / (1.0 - n / 2.0 + n * p / 2.0);
}

/// Required logistic damping for the consumption model with logistic source,
/// as a function of s = chi ||v0||_inf.
inline double C_mu(double s, int n) {
  if (n < 2)
    throw std::invalid_argument("C_mu requires n >= 2");
  if (s < 0.0)
    throw std::invalid_argument("C_mu requires s >= 0");
  const double nn = n;
  const double c1 = std::pow(4.0, 1.0 / nn) * (nn - 1.0) * nn / (nn + 1.0) *
                    std::pow((nn - 1.0) * (4.0 * nn * nn + nn) / (nn + 1.0), 1.0 / nn);
  const double c2 = std::pow(2.0, (nn - 1.0) / 2.0 + nn + 1.0) * (2.0 * nn - 1.0) / (nn + 1.0) *
                    std::pow((nn - 1.0) * (2.0 * nn - 1.0) * (4.0 * nn * nn + nn) / (nn + 1.0),
                             (nn - 1.0) / 2.0);
  return c1 * std::pow(s, 2.0 / nn) + c2 * std::pow(s, 2.0 * nn);
}

/// Required repulsion C(n) s^(4/n), n >= 3.
inline double C_xi(double s, int n) {
  if (n < 3)
    throw std::invalid_argument("C_xi requires n >= 3");
  if (s < 0.0)
    throw std::invalid_argument("C_xi requires s >= 0");
  return big_C(n) * std::pow(s, 4.0 / n);
}

struct HalfPCurves {
  double c_mu_half = 0.0;
  double c_xi_half = 0.0;
};

/// Both thresholds specialised to p = n/2, as tabulated for n = 3..6.
inline HalfPCurves halfp_curves(int n, double s) {
  if (s < 0.0)
    throw std::invalid_argument("halfp_curves requires s >= 0");
  using std::pow;
  using std::sqrt;
  switch (n) {
  case 3: {
    const double r = pow(6.0 / 5.0, 2.0 / 3.0) * pow(s, 4.0 / 3.0);
    return {6.0 / 5.0 * r + 56.0 / 5.0 * pow(21.0 / 5.0, 0.25) * pow(s, 3.0), 36.0 / 5.0 * r};
  }
  case 4: {
    const double r = sqrt(5.0 / 3.0) * s;
    return {8.0 / 3.0 * r + 400.0 / 3.0 * sqrt(2.0 / 3.0) * pow(s, 4.0), 32.0 / 3.0 * r};
  }
  case 5: {
    const double r = pow(5.0 / 7.0, 0.4) * pow(2.0, 0.2) * pow(3.0, 0.8) * pow(s, 0.8);
    return {15.0 / 7.0 * r + 624.0 / 7.0 * pow(2.0, 0.25) * sqrt(3.0) * pow(65.0 / 7.0, 0.75) *
                                 pow(s, 5.0),
            50.0 / 7.0 * r};
  }
  case 6: {
    const double r = pow(21.0 / 2.0, 1.0 / 3.0) * pow(s, 2.0 / 3.0);
    return {3.0 * r + 10752.0 * pow(s, 6.0), 9.0 * r};
  }
  default:
    throw std::invalid_argument("halfp_curves defined for n in {3,4,5,6}, got " +
                                std::to_string(n));
  }
}

/// Crossing abscissa of the p = n/2 curves, by bisection on (1e-6, 1).
inline double rho0(int n, double tol = 1e-10) {
  auto gap = [n](double s) {
    const auto c = halfp_curves(n, s);
    return c.c_mu_half - c.c_xi_half;
  };
  double lo = 1e-6, hi = 1.0;
  double glo = gap(lo);
  if (!(glo < 0.0) || !(gap(hi) > 0.0))
    throw std::runtime_error("rho0: no sign change on (1e-6, 1) for n = " + std::to_string(n));
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = gap(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Plotted s-domains: the comparison figure and its p = n/2 companion.
inline double fig1_domain_max(int n) {
  switch (n) {
  case 3: return 0.4;
  case 4: return 0.28;
  case 5: return 0.22;
  case 6: return 0.1758;
  default: throw std::invalid_argument("fig1 domain defined for n in {3,4,5,6}");
  }
}

inline double fig2_domain_max(int n) {
  switch (n) {
  case 3: return 0.7;
  case 4: return 0.6;
  case 5: return 0.5;
  case 6: return 0.4;
  default: throw std::invalid_argument("fig2 domain defined for n in {3,4,5,6}");
  }
}

struct TheoryReport {
  int n = 1;
  double p = 2.0;
  double tilde_C = 0.0;
  double xi_star = 0.0;
  double big_C = 0.0;
  std::optional<double> theta1;
  double theta = 0.0;
  OpenInterval p_range;
  OpenInterval alpha_range;
};

/// Collects every constant for (n, p, l) at s = ||chi v0||_inf.
/// theta1 is present only for l > 1 with p admissible; theta needs p > max(1, n/2).
inline TheoryReport report(int n, double p, double s, double l = 1.0) {
  TheoryReport r;
  r.n = n;
  r.p = p;
  r.tilde_C = tilde_C(p, n);
  r.xi_star = xi_threshold(p, n, s);
  r.big_C = big_C(n);
  r.p_range = p_admissible_range(l, n);
  r.alpha_range = alpha_admissible_range(n);
  if (l > 1.0 && r.p_range.contains(p))
    r.theta1 = gn_theta1(l, n, p);
  r.theta = p > std::max(1.0, n / 2.0) ? gn_theta(n, p) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

} // namespace chemo::theory

#endif // CHEMO_THEORY_HPP
