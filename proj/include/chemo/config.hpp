#ifndef CHEMO_CONFIG_HPP
#define CHEMO_CONFIG_HPP

// Line-oriented `section.key = value` run configuration.
//
//   grid.dim            1 | 2                       (default 1)
//   grid.n_cells        N  or  Nx Ny                (required)
//   grid.length         L  or  Lx Ly                (default 1)
//   params.chi|xi|delta|K|gamma|alpha               (required)
//   params.l                                        (default 1)
//   params.n                                        (default grid.dim)
//   initial.{u,v}_profile    constant | cosine-bump | gaussian-bump
//   initial.{u,v}_base       additive offset        (default 0)
//   initial.{u,v}_amplitude  profile amplitude      (required)
//   initial.{u,v}_center     x  or  x y             (default: domain center)
//   initial.{u,v}_width      gaussian std deviation (default 0.1)
//   run.t_end                                       (required)
//   run.dt_safety (0.4)  run.output_interval (t_end/10)  run.positivity (clip)
//   run.blowup_factor (1e3)  run.p_diag (by n)  run.w_tol (1e-10)  run.w_max_iter (0 = auto)
//   output.name (run)  output.snapshot_every (0 = off)
//
// Blank lines and lines starting with '#' are ignored.

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemo/grid.hpp"
#include "chemo/kinetics.hpp"
#include "chemo/state.hpp"

namespace chemo {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ProfileKind { constant, cosine_bump, gaussian_bump };

inline const char* to_string(ProfileKind k) {
  switch (k) {
  case ProfileKind::constant: return "constant";
  case ProfileKind::cosine_bump: return "cosine-bump";
  case ProfileKind::gaussian_bump: return "gaussian-bump";
  }
  return "?";
}

/// value(x) = base + amplitude * shape(x) where shape is 1 (constant),
/// (1 + prod_i cos(pi x_i / L_i)) / 2 (cosine-bump, zero normal derivative at
/// the walls) or exp(-|x - c|^2 / (2 width^2)) (gaussian-bump).
struct InitialProfile {
  ProfileKind kind = ProfileKind::constant;
  double base = 0.0;
  double amplitude = 1.0;
  std::vector<double> center; // empty: domain center
  double width = 0.1;

  friend bool operator==(const InitialProfile&, const InitialProfile&) = default;
};

inline ScalarField make_field(const GridSpec& g, const InitialProfile& prof) {
  std::array<double, 2> c{0.5 * g.length(0), 0.5 * g.length(1)};
  for (std::size_t a = 0; a < prof.center.size() && a < 2; ++a)
    c[a] = prof.center[a];
  return ScalarField::sample(g, [&](double x, double y) {
    double shape = 1.0;
    switch (prof.kind) {
    case ProfileKind::constant:
      break;
    case ProfileKind::cosine_bump: {
      double prod = std::cos(std::numbers::pi * x / g.length(0));
      if (g.dim() == 2)
        prod *= std::cos(std::numbers::pi * y / g.length(1));
      shape = 0.5 * (1.0 + prod);
      break;
    }
    case ProfileKind::gaussian_bump: {
      double r2 = (x - c[0]) * (x - c[0]);
      if (g.dim() == 2)
        r2 += (y - c[1]) * (y - c[1]);
      shape = std::exp(-r2 / (2.0 * prof.width * prof.width));
      break;
    }
    }
    return prof.base + prof.amplitude * shape;
  });
}

struct SimConfig {
  int dim = 1;
  std::vector<int> n_cells;
  std::vector<double> length;
  ModelParams params;
  InitialProfile u0;
  InitialProfile v0;
  double t_end = 1.0;
  double dt_safety = 0.4;
  std::optional<double> output_interval;
  PositivityMode positivity = PositivityMode::clip;
  double blowup_factor = 1e3;
  std::optional<double> p_diag;
  double w_tol = 1e-10;
  int w_max_iter = 0;
  std::string name = "run";
  int snapshot_every = 0;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;

  GridSpec grid() const {
    std::array<int, 2> n{n_cells.at(0), dim == 2 ? n_cells.at(n_cells.size() > 1 ? 1 : 0) : 1};
    std::array<double, 2> len{1.0, 1.0};
    if (!length.empty()) {
      len[0] = length[0];
      len[1] = length.size() > 1 ? length[1] : length[0];
    }
    return GridSpec(dim, n, len);
  }

  RunConfig to_run_config() const {
    RunConfig rc;
    rc.grid = grid();
    rc.params = params;
    rc.u0 = make_field(rc.grid, u0);
    rc.v0 = make_field(rc.grid, v0);
    rc.t_end = t_end;
    rc.dt_safety = dt_safety;
    rc.output_interval = output_interval.value_or(t_end / 10.0);
    rc.positivity = positivity;
    rc.blowup_factor = blowup_factor;
    rc.p_diag = p_diag.value_or(default_p_diag(params.n));
    rc.elliptic.tol = w_tol;
    rc.elliptic.max_iter = w_max_iter;
    rc.validate();
    return rc;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

class EntryTable {
public:
  explicit EntryTable(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string text(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end())
      throw ConfigError("missing required key `" + key + "`");
    it->second.used = true;
    return it->second.value;
  }

  std::vector<double> reals(const std::string& key) {
    const std::string raw = text(key);
    std::istringstream is(raw);
    std::vector<double> out;
    std::string tok;
    while (is >> tok)
      out.push_back(parse_real(key, tok));
    if (out.empty())
      fail(key, "expected a number");
    return out;
  }

  double real(const std::string& key) {
    const auto v = reals(key);
    if (v.size() != 1)
      fail(key, "expected a single number");
    return v[0];
  }

  double real_or(const std::string& key, double fallback) {
    return has(key) ? real(key) : fallback;
  }

  int integer(const std::string& key) {
    const double v = real(key);
    if (v != std::floor(v))
      fail(key, "expected an integer");
    return static_cast<int>(v);
  }

  int integer_or(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    auto it = entries_.find(key);
    const std::string where = it != entries_.end() ? " (line " + std::to_string(it->second.line) + ")" : "";
    throw ConfigError("invalid value for `" + key + "`" + where + ": " + what);
  }

  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [k, e] : entries_)
      if (!e.used)
        out.push_back(k + " (line " + std::to_string(e.line) + ")");
    return out;
  }

private:
  double parse_real(const std::string& key, const std::string& tok) const {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
      fail(key, "`" + tok + "` is not a number");
    return v;
  }

  std::map<std::string, Entry> entries_;
};

inline ProfileKind parse_profile_kind(EntryTable& t, const std::string& key) {
  const std::string v = t.text(key);
  if (v == "constant")
    return ProfileKind::constant;
  if (v == "cosine-bump")
    return ProfileKind::cosine_bump;
  if (v == "gaussian-bump")
    return ProfileKind::gaussian_bump;
  t.fail(key, "unknown profile `" + v + "`");
}

inline InitialProfile parse_profile(EntryTable& t, const std::string& field) {
  InitialProfile p;
  const std::string pre = "initial." + field + "_";
  p.kind = parse_profile_kind(t, pre + "profile");
  p.base = t.real_or(pre + "base", 0.0);
  p.amplitude = t.real(pre + "amplitude");
  if (t.has(pre + "center"))
    p.center = t.reals(pre + "center");
  p.width = t.real_or(pre + "width", 0.1);
  if (!(p.width > 0.0))
    t.fail(pre + "width", "must be positive");
  return p;
}

} // namespace detail

/// Parses config text. Errors name the offending key and, when known, its line.
/// Unknown keys are rejected.
inline SimConfig parse_config(std::istream& is) {
  std::map<std::string, detail::Entry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string s = detail::trim(line);
    if (s.empty() || s[0] == '#')
      continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected `section.key = value`");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string value = detail::trim(s.substr(eq + 1));
    if (key.find('.') == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": key `" + key +
                        "` lacks a section prefix");
    if (entries.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key `" + key + "`");
    entries[key] = {value, lineno, false};
  }

  detail::EntryTable t(std::move(entries));
  SimConfig c;
  c.dim = t.integer_or("grid.dim", 1);
  if (c.dim != 1 && c.dim != 2)
    t.fail("grid.dim", "must be 1 or 2");
  for (double v : t.reals("grid.n_cells")) {
    if (v != std::floor(v) || v < 3)
      t.fail("grid.n_cells", "cell counts must be integers >= 3");
    c.n_cells.push_back(static_cast<int>(v));
  }
  if (static_cast<int>(c.n_cells.size()) != c.dim)
    t.fail("grid.n_cells", "expected " + std::to_string(c.dim) + " entries");
  if (t.has("grid.length")) {
    c.length = t.reals("grid.length");
    if (static_cast<int>(c.length.size()) != c.dim)
      t.fail("grid.length", "expected " + std::to_string(c.dim) + " entries");
    for (double L : c.length)
      if (!(L > 0.0))
        t.fail("grid.length", "lengths must be positive");
  }

  c.params.chi = t.real("params.chi");
  c.params.xi = t.real("params.xi");
  c.params.delta = t.real("params.delta");
  c.params.K = t.real("params.K");
  c.params.gamma = t.real("params.gamma");
  c.params.alpha = t.real("params.alpha");
  c.params.l = t.real_or("params.l", 1.0);
  c.params.n = t.integer_or("params.n", c.dim);
  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  c.u0 = detail::parse_profile(t, "u");
  c.v0 = detail::parse_profile(t, "v");

  c.t_end = t.real("run.t_end");
  if (!(c.t_end > 0.0))
    t.fail("run.t_end", "must be positive");
  c.dt_safety = t.real_or("run.dt_safety", 0.4);
  if (!(c.dt_safety > 0.0 && c.dt_safety <= 1.0))
    t.fail("run.dt_safety", "must lie in (0, 1]");
  if (t.has("run.output_interval")) {
    c.output_interval = t.real("run.output_interval");
    if (!(*c.output_interval > 0.0))
      t.fail("run.output_interval", "must be positive");
  }
  if (t.has("run.positivity")) {
    const std::string m = t.text("run.positivity");
    if (m == "clip")
      c.positivity = PositivityMode::clip;
    else if (m == "upwind")
      c.positivity = PositivityMode::upwind;
    else
      t.fail("run.positivity", "expected clip or upwind");
  }
  c.blowup_factor = t.real_or("run.blowup_factor", 1e3);
  if (!(c.blowup_factor >= 1.0))
    t.fail("run.blowup_factor", "must be >= 1");
  if (t.has("run.p_diag")) {
    c.p_diag = t.real("run.p_diag");
    if (!(*c.p_diag > 1.0))
      t.fail("run.p_diag", "must exceed 1");
  }
  c.w_tol = t.real_or("run.w_tol", 1e-10);
  c.w_max_iter = t.integer_or("run.w_max_iter", 0);
  if (t.has("output.name"))
    c.name = t.text("output.name");
  c.snapshot_every = t.integer_or("output.snapshot_every", 0);

  const auto extra = t.unused();
  if (!extra.empty())
    throw ConfigError("unknown key `" + extra.front() + "`");
  return c;
}

inline SimConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is)
    throw ConfigError("cannot open config file `" + path + "`");
  return parse_config(is);
}

namespace detail {

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < v.size(); ++k)
    os << (k ? " " : "") << v[k];
  return os.str();
}

inline void write_profile(std::ostream& os, const std::string& f, const InitialProfile& p) {
  os << "initial." << f << "_profile = " << to_string(p.kind) << '\n';
  os << "initial." << f << "_base = " << p.base << '\n';
  os << "initial." << f << "_amplitude = " << p.amplitude << '\n';
  if (!p.center.empty())
    os << "initial." << f << "_center = " << join(p.center) << '\n';
  os << "initial." << f << "_width = " << p.width << '\n';
}

} // namespace detail

/// Serializes every setting; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const SimConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "grid.dim = " << c.dim << '\n';
  os << "grid.n_cells = " << detail::join(c.n_cells) << '\n';
  if (!c.length.empty())
    os << "grid.length = " << detail::join(c.length) << '\n';
  os << "params.chi = " << c.params.chi << '\n';
  os << "params.xi = " << c.params.xi << '\n';
  os << "params.delta = " << c.params.delta << '\n';
  os << "params.K = " << c.params.K << '\n';
  os << "params.gamma = " << c.params.gamma << '\n';
  os << "params.alpha = " << c.params.alpha << '\n';
  os << "params.l = " << c.params.l << '\n';
  os << "params.n = " << c.params.n << '\n';
  detail::write_profile(os, "u", c.u0);
  detail::write_profile(os, "v", c.v0);
  os << "run.t_end = " << c.t_end << '\n';
  os << "run.dt_safety = " << c.dt_safety << '\n';
  if (c.output_interval)
    os << "run.output_interval = " << *c.output_interval << '\n';
  os << "run.positivity = " << to_string(c.positivity) << '\n';
  os << "run.blowup_factor = " << c.blowup_factor << '\n';
  if (c.p_diag)
    os << "run.p_diag = " << *c.p_diag << '\n';
  os << "run.w_tol = " << c.w_tol << '\n';
  os << "run.w_max_iter = " << c.w_max_iter << '\n';
  os << "output.name = " << c.name << '\n';
  os << "output.snapshot_every = " << c.snapshot_every << '\n';
  return os.str();
}

} // namespace chemo

#endif // CHEMO_CONFIG_HPP
