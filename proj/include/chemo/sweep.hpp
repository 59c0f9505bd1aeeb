#ifndef CHEMO_SWEEP_HPP
#define CHEMO_SWEEP_HPP

#include <algorithm>
#include <atomic>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "chemo/config.hpp"
#include "chemo/kinetics.hpp"
#include "chemo/stepper.hpp"

namespace chemo {

enum class SweepAxis { xi, chi };

inline const char* to_string(SweepAxis a) { return a == SweepAxis::xi ? "xi" : "chi"; }

struct SweepRow {
  double value = 0.0;
  Termination termination = Termination::breakdown;
  std::string message;
  double max_sup_u = 0.0;
  double max_y_p = 0.0;
  double final_mass = 0.0;
  double xi_threshold = 0.0;    // C(n) ||chi v0||^(4/n) for this row's parameters
  bool theorem_condition = false; // hypotheses of the boundedness theorems hold
};

/// Copy of `base` with the swept coefficient replaced.
inline SimConfig with_axis_value(SimConfig base, SweepAxis axis, double value) {
  (axis == SweepAxis::xi ? base.params.xi : base.params.chi) = value;
  return base;
}

inline SweepRow sweep_one(const SimConfig& base, SweepAxis axis, double value) {
  SweepRow row;
  row.value = value;
  try {
    const SimConfig c = with_axis_value(base, axis, value);
    const RunConfig rc = c.to_run_config();
    const double s = c.params.chi * sup_norm(rc.v0);
    const HypothesisReport hyp = validate_hypotheses(c.params, s);
    row.xi_threshold = hyp.xi_threshold;
    row.theorem_condition = hyp.covered();
    const RunResult rr = run(rc);
    row.termination = rr.termination;
    row.message = rr.message;
    for (const auto& r : rr.records) {
      row.max_sup_u = std::max(row.max_sup_u, r.sup_u);
      row.max_y_p = std::max(row.max_y_p, r.y_p);
    }
    if (!rr.records.empty())
      row.final_mass = rr.records.back().mass;
  } catch (const std::exception& e) {
    row.termination = Termination::breakdown;
    row.message = e.what();
  }
  return row;
}

/// One run per value on up to `jobs` threads; rows keep the order of `values`.
inline std::vector<SweepRow> run_sweep(const SimConfig& base, SweepAxis axis,
                                       const std::vector<double>& values, int jobs = 1) {
  if (values.empty())
    throw std::invalid_argument(std::string("sweep over `") + to_string(axis) +
                                "` needs at least one value");
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++)
      rows[k] = sweep_one(base, axis, values[k]);
  };
  const int n_threads = std::clamp(jobs, 1, static_cast<int>(values.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
  return rows;
}

inline void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<SweepRow>& rows) {
  const auto old = os.precision(17);
  os << to_string(axis) << ",termination,max_sup_u,max_y_p,final_mass,xi_threshold,theorem_condition\n";
  for (const auto& r : rows)
    os << r.value << ',' << to_string(r.termination) << ',' << r.max_sup_u << ',' << r.max_y_p
       << ',' << r.final_mass << ',' << r.xi_threshold << ',' << (r.theorem_condition ? 1 : 0)
       << '\n';
  os.precision(old);
}

} // namespace chemo

#endif // CHEMO_SWEEP_HPP
