// Command-line driver: simulate, validate-config, thresholds, figures, sweep, mms.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical breakdown,
// 3 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chemo/chemo.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kBreakdown = 2;
constexpr int kVerifyFailed = 3;

std::ofstream open_out(const fs::path& dir, const std::string& file) {
  fs::create_directories(dir);
  std::ofstream os(dir / file);
  if (!os)
    throw std::runtime_error("cannot write " + (dir / file).string());
  return os;
}

std::string fmt_real(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void print_record(std::ostream& os, const chemo::DiagRecord& r) {
  os.precision(10);
  os << "  t            = " << r.t << '\n'
     << "  mass         = " << r.mass << '\n'
     << "  sup_u        = " << r.sup_u << '\n'
     << "  sup_v        = " << r.sup_v << '\n'
     << "  sup_w        = " << r.sup_w << '\n'
     << "  lp_u         = " << r.lp_u << '\n'
     << "  grad_v_sq    = " << r.grad_v_sq << '\n'
     << "  y_p          = " << r.y_p << '\n'
     << "  clipped_mass = " << r.clipped_mass << '\n';
}

void report_hypotheses(const chemo::SimConfig& c, const chemo::RunConfig& rc) {
  const double s = c.params.chi * chemo::sup_norm(rc.v0);
  const auto hyp = chemo::validate_hypotheses(c.params, s);
  for (const auto& w : hyp.warnings)
    std::cerr << "warning: " << w << '\n';
  std::cout << "hypotheses (n = " << hyp.n << "): alpha range " << chemo::format_interval(hyp.alpha_range)
            << (hyp.alpha_ok ? " ok" : " violated") << "; "
            << (hyp.linear_production ? "l = 1" : "l > 1");
  if (hyp.needs_xi_threshold)
    std::cout << "; xi threshold " << fmt_real(hyp.xi_threshold) << (hyp.xi_ok ? " exceeded" : " not exceeded");
  std::cout << '\n';
}

int cmd_simulate(const std::string& config_path, const fs::path& out, int snapshot_every_flag) {
  chemo::SimConfig c;
  chemo::RunConfig rc;
  try {
    c = chemo::load_config(config_path);
    rc = c.to_run_config();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  }
  report_hypotheses(c, rc);
  const int snap_every = snapshot_every_flag >= 0 ? snapshot_every_flag : c.snapshot_every;

  std::ofstream csv = open_out(out, c.name + "_diagnostics.csv");
  std::vector<std::pair<std::string, std::string>> meta;
  {
    std::istringstream cfg_text(chemo::serialize_config(c));
    std::string line;
    while (std::getline(cfg_text, line)) {
      const auto eq = line.find(" = ");
      meta.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    meta.emplace_back("p_diag_effective", fmt_real(rc.p_diag));
    meta.emplace_back("output_interval_effective", fmt_real(rc.output_interval));
  }
  chemo::write_csv_header(csv, meta);

  long n_records = 0;
  auto observer = [&](const chemo::SimState& s, const chemo::DiagRecord& r) {
    chemo::write_csv_row(csv, r);
    if (snap_every > 0 && n_records % snap_every == 0) {
      const std::string tag = std::to_string(n_records);
      auto su = open_out(out, c.name + "_u_" + tag + ".txt");
      chemo::write_snapshot(su, s.u, s.t);
      auto sv = open_out(out, c.name + "_v_" + tag + ".txt");
      chemo::write_snapshot(sv, s.v, s.t);
      auto sw = open_out(out, c.name + "_w_" + tag + ".txt");
      chemo::write_snapshot(sw, s.w, s.t);
    }
    ++n_records;
  };
  const chemo::RunResult rr = chemo::run(rc, observer);
  std::cout << "termination: " << chemo::to_string(rr.termination);
  if (!rr.message.empty())
    std::cout << " (" << rr.message << ")";
  std::cout << '\n';
  if (!rr.records.empty()) {
    std::cout << "final record:\n";
    print_record(std::cout, rr.records.back());
  }
  return rr.termination == chemo::Termination::breakdown ? kBreakdown : kOk;
}

int cmd_validate_config(const std::string& config_path) {
  try {
    const chemo::SimConfig c = chemo::load_config(config_path);
    const chemo::RunConfig rc = c.to_run_config();
    report_hypotheses(c, rc);
    std::cout << chemo::serialize_config(c);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

int cmd_thresholds(const std::vector<int>& ns, const std::vector<double>& ps,
                   const std::vector<double>& ss, bool csv, const fs::path& out) {
  std::vector<chemo::figures::ThresholdRow> rows;
  try {
    rows = chemo::figures::threshold_table(ns, ps, ss);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (!out.empty()) {
    auto os = open_out(out, "thresholds.csv");
    chemo::figures::write_threshold_csv(os, rows);
  }
  if (csv) {
    chemo::figures::write_threshold_csv(std::cout, rows);
    return kOk;
  }
  std::printf("%4s %10s %10s %16s %16s %16s %16s\n", "n", "p", "s", "tilde_C", "xi_star", "C(n)",
              "C(n)s^(4/n)");
  for (const auto& r : rows)
    std::printf("%4d %10.4g %10.4g %16.8g %16.8g %16.8g %16.8g\n", r.n, r.p, r.s, r.tilde_C,
                r.xi_star, r.big_C, r.theorem_xi);
  return kOk;
}

int cmd_figures(const std::string& variant, const fs::path& out, int samples) {
  using chemo::figures::Variant;
  const Variant v = variant == "fig1" ? Variant::fig1 : Variant::fig2;
  for (int n = 3; n <= 6; ++n) {
    auto os = open_out(out, variant + "_n" + std::to_string(n) + ".csv");
    chemo::figures::write_curve_csv(os, chemo::figures::curve(v, n, samples));
  }
  if (v == Variant::fig2) {
    auto os = open_out(out, "fig2_rho0.csv");
    chemo::figures::write_rho0_csv(os);
    chemo::figures::write_rho0_csv(std::cout);
  }
  std::cout << "wrote " << variant << " data to " << out.string() << '\n';
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& xi_values,
              const std::vector<double>& chi_values, int jobs, const fs::path& out) {
  if (!xi_values.empty() && !chi_values.empty()) {
    std::cerr << "error: choose one sweep axis (--xi or --chi)\n";
    return kUsage;
  }
  const bool is_chi = !chi_values.empty();
  const chemo::SweepAxis axis = is_chi ? chemo::SweepAxis::chi : chemo::SweepAxis::xi;
  const auto& values = is_chi ? chi_values : xi_values;
  if (values.empty()) {
    std::cerr << "error: empty sweep list for axis `" << chemo::to_string(axis) << "`\n";
    return kUsage;
  }
  chemo::SimConfig base;
  try {
    base = chemo::load_config(config_path);
    (void)base.to_run_config();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  }
  const auto rows = chemo::run_sweep(base, axis, values, jobs);
  auto os = open_out(out, base.name + "_sweep.csv");
  chemo::write_sweep_csv(os, axis, rows);
  chemo::write_sweep_csv(std::cout, axis, rows);
  for (const auto& r : rows)
    if (r.termination == chemo::Termination::breakdown)
      std::cerr << "run " << chemo::to_string(axis) << " = " << r.value << ": " << r.message << '\n';
  return kOk;
}

int cmd_mms(int refinements, bool constant) {
  if (refinements < 3) {
    std::cerr << "error: --refinements must be >= 3\n";
    return kUsage;
  }
  chemo::MmsOptions opts;
  opts.refinements = refinements;
  opts.amplitude = constant ? 0.0 : 1.0;
  chemo::MmsResult res;
  try {
    res = chemo::run_mms(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBreakdown;
  }
  std::printf("%8s %14s %14s %8s %8s\n", "cells", "err_u", "err_v", "ord_u", "ord_v");
  for (std::size_t k = 0; k < res.cells.size(); ++k) {
    if (k == 0 || res.order_u.empty())
      std::printf("%8d %14.6e %14.6e %8s %8s\n", res.cells[k], res.err_u[k], res.err_v[k], "-", "-");
    else
      std::printf("%8d %14.6e %14.6e %8.4f %8.4f\n", res.cells[k], res.err_u[k], res.err_v[k],
                  res.order_u[k - 1], res.order_v[k - 1]);
  }
  if (res.order_skipped)
    std::printf("errors at round-off level; order test skipped\n");
  std::printf("mms: %s\n", res.passed ? "PASS" : "FAIL");
  return res.passed ? kOk : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attraction-repulsion chemotaxis simulator and threshold calculator"};
  app.require_subcommand(1);
  std::string out = "out";
  int jobs = 1;
  int snapshot_every = -1;
  app.add_option("--out", out, "Output directory")->capture_default_str();

  std::string sim_config;
  auto* sim = app.add_subcommand("simulate", "Run one simulation from a config file");
  sim->add_option("config", sim_config, "Config file")->required();
  sim->add_option("--out", out, "Output directory");
  sim->add_option("--snapshot-every", snapshot_every, "Write u/v/w snapshots every k records");

  std::string val_config;
  auto* val = app.add_subcommand("validate-config", "Parse a config and report hypotheses");
  val->add_option("config", val_config, "Config file")->required();

  std::vector<int> ns{1, 2, 3, 4, 5, 6};
  std::vector<double> ps{2.0};
  std::vector<double> ss{1.0};
  bool csv = false;
  auto* thr = app.add_subcommand("thresholds", "Tabulate C~(p,n), xi*, C(n)");
  thr->add_option("--n", ns, "Dimensions")->delimiter(',');
  thr->add_option("--p", ps, "Exponents p > 1")->delimiter(',');
  thr->add_option("--s", ss, "Values of ||chi v0||_inf")->delimiter(',');
  thr->add_flag("--csv", csv, "CSV instead of an aligned table");
  thr->add_option("--out", out, "Also write thresholds.csv here");

  std::string variant;
  int samples = 200;
  auto* fig = app.add_subcommand("figures", "Write threshold-curve CSVs");
  fig->add_option("variant", variant, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
  fig->add_option("--samples", samples, "Points per curve")->check(CLI::Range(2, 1000000));
  fig->add_option("--out", out, "Output directory");

  std::string sweep_config;
  std::vector<double> xi_values, chi_values;
  auto* sw = app.add_subcommand("sweep", "Run one simulation per parameter value");
  sw->add_option("config", sweep_config, "Base config file")->required();
  sw->add_option("--xi", xi_values, "xi values")->delimiter(',');
  sw->add_option("--chi", chi_values, "chi values")->delimiter(',');
  sw->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  sw->add_option("--out", out, "Output directory");

  int refinements = 4;
  bool constant = false;
  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence check");
  mms->add_option("--refinements", refinements, "Number of grids (>= 3)");
  mms->add_flag("--constant", constant, "Use the constant manufactured solution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sim)
      return cmd_simulate(sim_config, out, snapshot_every);
    if (*val)
      return cmd_validate_config(val_config);
    if (*thr)
      return cmd_thresholds(ns, ps, ss, csv, thr->count("--out") ? fs::path(out) : fs::path());
    if (*fig)
      return cmd_figures(variant, out, samples);
    if (*sw)
      return cmd_sweep(sweep_config, xi_values, chi_values, jobs, out);
    if (*mms)
      return cmd_mms(refinements, constant);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
