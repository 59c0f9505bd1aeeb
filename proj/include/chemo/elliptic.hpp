#ifndef CHEMO_ELLIPTIC_HPP
#define CHEMO_ELLIPTIC_HPP

// Screened Poisson solve (delta I - Lap_h) w = source with zero-flux walls.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemo/grid.hpp"

namespace chemo {

struct EllipticResult {
  ScalarField w;
  double residual = 0.0; // ||(delta I - Lap_h) w - source||_2 / ||source||_2
  int iterations = 0;
};

class EllipticError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EllipticOptions {
  double tol = 1e-10;
  int max_iter = 0; // 0 selects 10 x cell count
};

namespace detail {

inline ScalarField apply_screened(const ScalarField& w, double delta) {
  ScalarField out = laplacian_neumann(w);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = delta * w[k] - out[k];
  return out;
}

// out = (delta I - Lap_h) w on the reflected 5-point stencil, without
// allocating; returns <w, out>. Missing neighbours across a wall are replaced
// by the cell itself, which zeroes that face flux without branching.
inline double apply_screened_into(const ScalarField& w, double delta, ScalarField& out) {
  const GridSpec& g = w.spec();
  const int n0 = g.n(0), n1 = g.n(1);
  const double cx = 1.0 / (g.h(0) * g.h(0));
  const double cy = g.dim() == 2 ? 1.0 / (g.h(1) * g.h(1)) : 0.0;
  const double* a = w.values().data();
  double* o = out.values().data();
  double dot = 0.0;
  for (int i = 0; i < n0; ++i) {
    const double* row = a + static_cast<std::size_t>(i) * n1;
    const double* up = i > 0 ? row - n1 : row;
    const double* dn = i < n0 - 1 ? row + n1 : row;
    double* orow = o + static_cast<std::size_t>(i) * n1;
    auto cell = [&](int j, double left, double right) {
      const double c = row[j];
      const double r = delta * c + cx * (2.0 * c - up[j] - dn[j]) + cy * (2.0 * c - left - right);
      orow[j] = r;
      dot += c * r;
    };
    if (n1 == 1) {
      cell(0, row[0], row[0]);
      continue;
    }
    cell(0, row[0], row[1]);
    for (int j = 1; j < n1 - 1; ++j)
      cell(j, row[j - 1], row[j + 1]);
    cell(n1 - 1, row[n1 - 2], row[n1 - 1]);
  }
  return dot;
}

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x)
    s += v * v;
  return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += a[k] * b[k];
  return s;
}

// Thomas algorithm on the 1D reflected stencil.
inline ScalarField solve_tridiagonal(const ScalarField& source, double delta) {
  const GridSpec& g = source.spec();
  const int n = g.n(0);
  const double c = 1.0 / (g.h(0) * g.h(0));
  std::vector<double> diag(n), upper(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    const int neighbors = (i == 0 || i == n - 1) ? 1 : 2;
    diag[i] = delta + neighbors * c;
    upper[i] = -c;
    rhs[i] = source[i];
  }
  // lower[i] = -c for i >= 1
  for (int i = 1; i < n; ++i) {
    const double m = -c / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  ScalarField w(g);
  w[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i)
    w[i] = (rhs[i] - upper[i] * w[i + 1]) / diag[i];
  return w;
}

} // namespace detail

/// Successive backward differences of `levels` (newest first): the newest
/// level, its first difference, second difference, and so on. They span the
/// same space as the levels but stay well separated when the levels are
/// nearly equal.
inline std::vector<ScalarField> difference_basis(std::vector<ScalarField> levels) {
  std::vector<ScalarField> basis;
  for (std::size_t order = 0; order < levels.size(); ++order) {
    if (order > 0)
      for (std::size_t m = 0; m + order < levels.size(); ++m)
        for (std::size_t k = 0; k < levels[m].size(); ++k)
          levels[m][k] -= levels[m + 1][k];
    basis.push_back(levels.front());
  }
  return basis;
}

/// Starting iterate for solve_w when a sequence of nearby problems is solved:
/// the Galerkin projection of the solution onto span(basis), i.e. the
/// combination with the smallest error in the energy norm of
/// A = delta I - Lap_h, which is the norm CG minimizes. Basis fields that are
/// numerically dependent on earlier ones are dropped. Pass well separated
/// directions such as difference_basis(previous solutions); nearly equal raw
/// levels lose their differences to rounding in A b.
inline ScalarField projected_guess(const ScalarField& source, double delta,
                                   std::vector<ScalarField> basis) {
  const GridSpec& g = source.spec();
  ScalarField guess(g, 0.0);
  std::vector<ScalarField> x, ax; // A-orthonormal x[i], with ax[i] = A x[i]
  for (ScalarField& b : basis) {
    ScalarField ab(g);
    detail::apply_screened_into(b, delta, ab);
    const double n0 = std::sqrt(detail::dot(b.values(), ab.values()));
    if (!(n0 > 0.0))
      continue;
    // two Gram-Schmidt passes keep orthogonality when n / n0 is tiny
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = detail::dot(x[i].values(), ab.values());
        for (std::size_t k = 0; k < b.size(); ++k) {
          b[k] -= c * x[i][k];
          ab[k] -= c * ax[i][k];
        }
      }
    const double n2 = detail::dot(b.values(), ab.values());
    if (!(n2 > 1e-24 * n0 * n0))
      continue;
    const double n = std::sqrt(n2);
    for (std::size_t k = 0; k < b.size(); ++k) {
      b[k] /= n;
      ab[k] /= n;
    }
    x.push_back(std::move(b));
    ax.push_back(std::move(ab));
  }
  for (const ScalarField& xi : x) {
    const double c = detail::dot(xi.values(), source.values());
    for (std::size_t k = 0; k < guess.size(); ++k)
      guess[k] += c * xi[k];
  }
  return guess;
}

/// Solves (delta I - Lap_h) w = source. 1D uses a direct tridiagonal solve;
/// 2D uses Jacobi-preconditioned conjugate gradients from `initial` (or zero).
/// Throws EllipticError when CG misses the tolerance within max_iter.
inline EllipticResult solve_w(const ScalarField& source, double delta,
                              const EllipticOptions& opts = {},
                              const std::optional<ScalarField>& initial = std::nullopt) {
  if (!(delta > 0.0))
    throw std::invalid_argument("solve_w requires delta > 0");
  const GridSpec& g = source.spec();
  const double src_norm = detail::norm2(source.values());
  EllipticResult res;
  if (src_norm == 0.0) {
    res.w = ScalarField(g, 0.0);
    return res;
  }
  // A spatially constant source has the exact discrete solution c / delta.
  const auto vals = source.values();
  if (std::all_of(vals.begin(), vals.end(), [&](double x) { return x == vals[0]; })) {
    res.w = ScalarField(g, vals[0] / delta);
    return res;
  }

  if (g.dim() == 1) {
    res.w = detail::solve_tridiagonal(source, delta);
    ScalarField r = detail::apply_screened(res.w, delta);
    for (std::size_t k = 0; k < r.size(); ++k)
      r[k] -= source[k];
    res.residual = detail::norm2(r.values()) / src_norm;
    res.iterations = 1;
    return res;
  }

  const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(10 * g.size());
  ScalarField w = initial && initial->spec() == g ? *initial : ScalarField(g, 0.0);

  // Jacobi preconditioner: diagonal of delta I - Lap_h, which only depends on
  // how many neighbours a cell has along each axis.
  const double cx = 1.0 / (g.h(0) * g.h(0)), cy = 1.0 / (g.h(1) * g.h(1));
  double inv_table[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      inv_table[a][b] = 1.0 / (delta + a * cx + b * cy);
  std::vector<double> inv_diag(g.size());
  for (int i = 0; i < g.n(0); ++i)
    for (int j = 0; j < g.n(1); ++j)
      inv_diag[g.index(i, j)] =
          inv_table[(i > 0) + (i < g.n(0) - 1)][(j > 0) + (j < g.n(1) - 1)];

  const double target = opts.tol * src_norm;
  int it = 0;
  ScalarField r(g), z(g), p(g), q(g);

  // CG with restarts: the recursive residual can drift from the true one.
  double rnorm = 0.0;
  for (;;) {
    detail::apply_screened_into(w, delta, r);
    double mean = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      r[k] = source[k] - r[k];
      mean += r[k];
    }
    // The constant mode has eigenvalue delta: shifting w by mean / delta
    // lowers every residual entry by exactly the mean.
    mean /= static_cast<double>(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
      w[k] += mean / delta;
      r[k] -= mean;
    }
    rnorm = detail::norm2(r.values());
    if (rnorm <= target || it >= max_iter)
      break;
    double rz = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      z[k] = inv_diag[k] * r[k];
      p[k] = z[k];
      rz += r[k] * z[k];
    }
    while (rnorm > 0.5 * target && it < max_iter) {
      ++it;
      const double step = rz / detail::apply_screened_into(p, delta, q);
      double rz_new = 0.0, rr = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] += step * p[k];
        r[k] -= step * q[k];
        z[k] = inv_diag[k] * r[k];
        rz_new += r[k] * z[k];
        rr += r[k] * r[k];
      }
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = z[k] + beta * p[k];
      rnorm = std::sqrt(rr);
    }
  }

  res.w = std::move(w);
  res.residual = rnorm / src_norm;
  res.iterations = it;
  if (res.residual > opts.tol)
    throw EllipticError("elliptic solve did not converge in " + std::to_string(max_iter) +
                        " iterations (relative residual " + std::to_string(res.residual) + ")");
  return res;
}

} // namespace chemo

#endif // CHEMO_ELLIPTIC_HPP
