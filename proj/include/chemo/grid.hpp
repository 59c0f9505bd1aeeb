#ifndef CHEMO_GRID_HPP
#define CHEMO_GRID_HPP

// Uniform cell-centered grids on intervals and rectangles, scalar fields over
// them, and the zero-flux finite-volume operators used by every other module.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemo {

/// Rectangular domain [0, L_0] x [0, L_1] split into uniform cells.
/// For dim == 1 the second axis is a single dummy cell of unit length.
class GridSpec {
public:
  GridSpec() = default;

  /// 1D interval [0, length] with n cells.
  static GridSpec line(int n, double length = 1.0) {
    return GridSpec(1, {n, 1}, {length, 1.0});
  }

  /// 2D rectangle [0, lx] x [0, ly].
  static GridSpec rect(int nx, int ny, double lx = 1.0, double ly = 1.0) {
    return GridSpec(2, {nx, ny}, {lx, ly});
  }

  GridSpec(int dim, std::array<int, 2> n_cells, std::array<double, 2> length)
      : dim_(dim), n_(n_cells), length_(length) {
    if (dim != 1 && dim != 2)
      throw std::invalid_argument("grid dim must be 1 or 2, got " + std::to_string(dim));
    if (dim == 1) {
      n_[1] = 1;
      length_[1] = 1.0;
    }
    for (int a = 0; a < dim; ++a) {
      if (n_[a] < 3)
        throw std::invalid_argument("grid n_cells must be >= 3 on every axis");
      if (!(length_[a] > 0.0) || !std::isfinite(length_[a]))
        throw std::invalid_argument("grid length must be positive and finite");
    }
    for (int a = 0; a < 2; ++a)
      h_[a] = length_[a] / n_[a];
  }

  int dim() const { return dim_; }
  int n(int axis) const { return n_[axis]; }
  double length(int axis) const { return length_[axis]; }
  double h(int axis) const { return h_[axis]; }
  std::array<int, 2> n_cells() const { return n_; }
  std::array<double, 2> lengths() const { return length_; }

  std::size_t size() const { return static_cast<std::size_t>(n_[0]) * n_[1]; }
  double cell_volume() const { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }
  double measure() const { return dim_ == 1 ? length_[0] : length_[0] * length_[1]; }

  /// Smallest spacing over active axes.
  double min_h() const { return dim_ == 1 ? h_[0] : std::min(h_[0], h_[1]); }

  /// Row-major: the last axis varies fastest.
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) * n_[1] + j;
  }

  /// Stride between neighbors along an axis in the flat layout.
  std::size_t stride(int axis) const { return axis == 0 ? n_[1] : 1; }

  double center(int axis, int k) const { return (k + 0.5) * h_[axis]; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
  }

private:
  int dim_ = 1;
  std::array<int, 2> n_{3, 1};
  std::array<double, 2> length_{1.0, 1.0};
  std::array<double, 2> h_{1.0 / 3.0, 1.0};
};

/// Cell-centered values over a GridSpec.
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& spec, double value = 0.0)
      : spec_(spec), values_(spec.size(), value) {}
  ScalarField(const GridSpec& spec, std::vector<double> values)
      : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.size())
      throw std::invalid_argument("field size does not match grid cell count");
  }

  /// Samples fn(x, y) at cell centers (y = 0 in 1D).
  template <typename Fn>
  static ScalarField sample(const GridSpec& spec, Fn&& fn) {
    ScalarField out(spec);
    for (int i = 0; i < spec.n(0); ++i)
      for (int j = 0; j < spec.n(1); ++j) {
        const double x = spec.center(0, i);
        const double y = spec.dim() == 2 ? spec.center(1, j) : 0.0;
        out.values_[spec.index(i, j)] = fn(x, y);
      }
    return out;
  }

  const GridSpec& spec() const { return spec_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& at(int i, int j = 0) { return values_[spec_.index(i, j)]; }
  double at(int i, int j = 0) const { return values_[spec_.index(i, j)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double x) { return std::isfinite(x); });
  }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
  GridSpec spec_;
  std::vector<double> values_;
};

inline void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.spec() == b.spec()))
    throw std::invalid_argument("fields live on different grids");
}

/// Midpoint-rule integral over the domain.
inline double integrate(const ScalarField& f) {
  double sum = 0.0;
  for (double x : f.values())
    sum += x;
  return sum * f.spec().cell_volume();
}

namespace detail {

// Visits every interior face as (left cell, right cell, axis).
template <typename Visit>
void for_each_face(const GridSpec& g, Visit&& visit) {
  for (int axis = 0; axis < g.dim(); ++axis) {
    const std::size_t s = g.stride(axis);
    const int ni = axis == 0 ? g.n(0) - 1 : g.n(0);
    const int nj = axis == 1 ? g.n(1) - 1 : g.n(1);
    for (int i = 0; i < ni; ++i)
      for (int j = 0; j < nj; ++j) {
        const std::size_t l = g.index(i, j);
        visit(l, l + s, axis);
      }
  }
}

} // namespace detail

/// Face-weight rule for the cross-diffusion flux.
enum class FluxScheme { central, upwind };

/// Discrete div(u grad(phi)) in conservative face-flux form with zero flux
/// through the boundary. Upwinding takes the cell upstream of the velocity
/// +grad(phi), i.e. the donor cell for the term -div(u grad(phi)).
inline ScalarField div_u_grad_phi(const ScalarField& u, const ScalarField& phi,
                                  FluxScheme scheme = FluxScheme::central) {
  require_same_grid(u, phi);
  const GridSpec& g = u.spec();
  ScalarField out(g);
  detail::for_each_face(g, [&](std::size_t l, std::size_t r, int axis) {
    const double h = g.h(axis);
    const double grad = (phi[r] - phi[l]) / h;
    double u_face;
    if (scheme == FluxScheme::central)
      u_face = 0.5 * (u[l] + u[r]);
    else
      u_face = grad >= 0.0 ? u[l] : u[r];
    const double flux = u_face * grad / h;
    out[l] += flux;
    out[r] -= flux;
  });
  return out;
}

/// Second-order Laplacian with reflected ghost cells (zero normal flux).
inline ScalarField laplacian_neumann(const ScalarField& f) {
  const GridSpec& g = f.spec();
  ScalarField out(g);
  detail::for_each_face(g, [&](std::size_t l, std::size_t r, int axis) {
    const double h = g.h(axis);
    const double flux = 1.0 * ((f[r] - f[l]) / h) / h;
    out[l] += flux;
    out[r] -= flux;
  });
  return out;
}

/// Discrete integral of |grad f|^2 from interior face differences.
inline double grad_sq_integral(const ScalarField& f) {
  const GridSpec& g = f.spec();
  double sum = 0.0;
  detail::for_each_face(g, [&](std::size_t l, std::size_t r, int axis) {
    const double d = (f[r] - f[l]) / g.h(axis);
    sum += d * d;
  });
  return sum * g.cell_volume();
}

/// Cell-wise |grad f| from central differences; boundary cells see the
/// reflected ghost value, so the outward difference is one-sided.
inline ScalarField grad_magnitude(const ScalarField& f) {
  const GridSpec& g = f.spec();
  ScalarField out(g);
  for (int i = 0; i < g.n(0); ++i)
    for (int j = 0; j < g.n(1); ++j) {
      double sq = 0.0;
      for (int axis = 0; axis < g.dim(); ++axis) {
        const int k = axis == 0 ? i : j;
        const int nk = g.n(axis);
        const int km = std::max(k - 1, 0);
        const int kp = std::min(k + 1, nk - 1);
        const double fm = axis == 0 ? f.at(km, j) : f.at(i, km);
        const double fp = axis == 0 ? f.at(kp, j) : f.at(i, kp);
        const double d = (fp - fm) / (2.0 * g.h(axis));
        sq += d * d;
      }
      out.at(i, j) = std::sqrt(sq);
    }
  return out;
}

inline double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.values())
    m = std::max(m, std::abs(x));
  return m;
}

inline double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("lp_norm requires p >= 1");
  double sum = 0.0;
  for (double x : f.values())
    sum += std::pow(std::abs(x), p);
  return std::pow(sum * f.spec().cell_volume(), 1.0 / p);
}

// Snapshot text format:
//   dim <d>
//   n_cells <n0> [<n1>]
//   length <L0> [<L1>]
//   time <t>
//   <values, row-major, whitespace separated>

inline void write_snapshot(std::ostream& os, const ScalarField& f, double time) {
  const GridSpec& g = f.spec();
  const auto old_prec = os.precision(17);
  os << "dim " << g.dim() << '\n' << "n_cells";
  for (int a = 0; a < g.dim(); ++a)
    os << ' ' << g.n(a);
  os << '\n' << "length";
  for (int a = 0; a < g.dim(); ++a)
    os << ' ' << g.length(a);
  os << '\n' << "time " << time << '\n';
  for (int i = 0; i < g.n(0); ++i) {
    for (int j = 0; j < g.n(1); ++j)
      os << (j ? " " : "") << f.at(i, j);
    os << '\n';
  }
  os.precision(old_prec);
}

struct Snapshot {
  ScalarField field;
  double time = 0.0;
};

inline Snapshot read_snapshot(std::istream& is) {
  auto expect = [&](const char* key) {
    std::string word;
    if (!(is >> word) || word != key)
      throw std::runtime_error(std::string("snapshot: expected '") + key + "'");
  };
  int dim = 0;
  expect("dim");
  is >> dim;
  std::array<int, 2> n{1, 1};
  std::array<double, 2> len{1.0, 1.0};
  expect("n_cells");
  for (int a = 0; a < dim; ++a)
    is >> n[a];
  expect("length");
  for (int a = 0; a < dim; ++a)
    is >> len[a];
  double t = 0.0;
  expect("time");
  is >> t;
  if (!is)
    throw std::runtime_error("snapshot: malformed header");
  GridSpec g(dim, n, len);
  std::vector<double> vals(g.size());
  for (double& x : vals)
    if (!(is >> x))
      throw std::runtime_error("snapshot: too few values");
  return {ScalarField(g, std::move(vals)), t};
}

} // namespace chemo

#endif // CHEMO_GRID_HPP
