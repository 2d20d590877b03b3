#include "fastrd/experiment.hpp"

#include "fastrd/analysis.hpp"
#include "fastrd/csv.hpp"
#include "fastrd/reference.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace fastrd {

namespace {

// ---------------------------------------------------------------------------
// Worker pool. Results land in slots indexed by job, so output order never
// depends on scheduling.

struct Job {
  std::string label;
  std::function<void()> work;
};

std::vector<RunRecord> run_jobs(std::vector<Job>& jobs, int threads) {
  std::vector<RunRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      RunRecord& rec = records[i];
      rec.label = jobs[i].label;
      const auto start = std::chrono::steady_clock::now();
      try {
        jobs[i].work();
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
      }
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::clamp(n, 1, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

std::string fmt(double x) { return format_number(x); }

int pow2(int k) { return 1 << k; }

int log2_exact(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

Field pick(const StateField& s, ErrorField f, const ModelParams& params) {
  switch (f) {
    case ErrorField::U: return s.u;
    case ErrorField::V: return s.v;
    case ErrorField::P: return s.p;
    case ErrorField::W: return enthalpy(s, params);
  }
  return s.u;
}

StateField restrict_state(const StateField& fine, const Grid& coarse, int levels) {
  return {restrict_to_coarse(fine.u, coarse, levels), restrict_to_coarse(fine.v, coarse, levels),
          restrict_to_coarse(fine.p, coarse, levels), fine.t};
}

RunConfig with_grid_cells(RunConfig c, int cells) {
  c.grid = Grid(c.grid.dim(), c.grid.a(), c.grid.b(), cells);
  return c;
}

// One row per node: coords..., t, u, v, p, w, theta, optionally led by `lead`.
void append_snapshot(CsvTable& table, const StateField& s, const Grid& grid, const ModelParams& params,
                     const std::vector<double>& lead = {}) {
  const Field w = enthalpy(s, params);
  const Field theta = temperature(w, params);
  const int n = grid.nodes_per_axis();
  const int rows_y = grid.dim() == 2 ? n : 1;
  for (int j = 0; j < rows_y; ++j) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Index k = grid.index(i, j);
      std::vector<double> row = lead;
      row.push_back(grid.coord(i));
      if (grid.dim() == 2) row.push_back(grid.coord(j));
      row.insert(row.end(), {s.t, s.u(k), s.v(k), s.p(k), w(k), theta(k)});
      table.add_row(row);
    }
  }
}

std::vector<std::string> snapshot_header(int dim, const std::vector<std::string>& lead = {}) {
  std::vector<std::string> h = lead;
  if (dim == 1) h.push_back("x");
  else h.insert(h.end(), {"x1", "x2"});
  h.insert(h.end(), {"t", "u", "v", "p", "w", "theta"});
  return h;
}

struct InterfaceSample {
  std::optional<double> position;
  double width = 0.0;
};

// 1D: the leftmost crossing. 2D: the mean leftmost crossing over rows that
// have one, with the width taken along the middle row.
InterfaceSample locate_interface(const StateField& s, const Grid& grid, const ModelParams& params) {
  const Field w = enthalpy(s, params);
  InterfaceSample out;
  if (grid.dim() == 1) {
    const auto pos = interface_position(w, grid, params);
    if (!pos.empty()) out.position = pos.front();
    out.width = interface_width(w, grid, params);
    return out;
  }
  double sum = 0.0;
  int count = 0;
  for (const auto& row : interface_position_rows(w, grid, params)) {
    if (row.empty()) continue;
    sum += row.front();
    ++count;
  }
  if (count) out.position = sum / count;
  const int n = grid.nodes_per_axis();
  const Grid line(1, grid.a(), grid.b(), grid.cells());
  out.width = interface_width(w.segment(grid.index(0, n / 2), n), line, params);
  return out;
}

std::string path_in(const RunOptions& opt, const std::string& file) {
  return (std::filesystem::path(opt.out_dir) / file).string();
}

void write(RunReport& report, const RunOptions& opt, const CsvTable& table, const std::string& file) {
  const std::string p = path_in(opt, file);
  table.write(p);
  report.files.push_back(p);
}

void check(RunReport& report, std::string name, bool pass, std::string detail) {
  report.checks.push_back({std::move(name), pass, std::move(detail)});
}

bool all_ok(const std::vector<RunRecord>& runs) {
  return std::all_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.ok; });
}

// ---------------------------------------------------------------------------

struct ErrorRow {
  double sweep_value;
  ErrorTriple e;
};

// Rows sorted by increasing sweep value; orders sit on the second row of
// each consecutive pair, as in the published tables.
CsvTable error_table(std::vector<ErrorRow> rows, std::vector<std::optional<double>>* orders_inf = nullptr,
                     std::vector<std::optional<double>>* orders_2 = nullptr) {
  std::sort(rows.begin(), rows.end(), [](const ErrorRow& a, const ErrorRow& b) { return a.sweep_value < b.sweep_value; });
  CsvTable t({"sweep_value", "e_inf", "order_inf", "e_1", "order_1", "e_2", "order_2"});
  auto order = [&rows](std::size_t i, double ErrorTriple::*m) -> std::optional<double> {
    if (i == 0) return std::nullopt;
    const double a = rows[i - 1].e.*m;
    const double b = rows[i].e.*m;
    if (a == 0.0 || b == 0.0) return std::nullopt;
    return observed_order({{rows[i - 1].sweep_value, a}, {rows[i].sweep_value, b}}).front();
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto oi = order(i, &ErrorTriple::e_inf);
    const auto o2 = order(i, &ErrorTriple::e_2);
    if (orders_inf && i) orders_inf->push_back(oi);
    if (orders_2 && i) orders_2->push_back(o2);
    t.add_row(std::vector<std::optional<double>>{rows[i].sweep_value, rows[i].e.e_inf, oi, rows[i].e.e_1,
                                                 order(i, &ErrorTriple::e_1), rows[i].e.e_2, o2});
  }
  return t;
}

void check_orders(RunReport& report, const std::string& label, const std::vector<double>& expected,
                  const std::vector<std::optional<double>>& observed, double tol) {
  if (expected.empty()) return;
  bool pass = expected.size() == observed.size();
  std::ostringstream d;
  d << "tol " << tol << ";";
  for (std::size_t i = 0; i < expected.size() && i < observed.size(); ++i) {
    const bool ok = observed[i] && std::abs(*observed[i] - expected[i]) <= tol;
    pass = pass && ok;
    d << " " << (observed[i] ? fmt(*observed[i]) : std::string("-")) << (ok ? "" : "!") << "/" << fmt(expected[i]);
  }
  if (expected.size() != observed.size()) d << " (row count " << observed.size() << " vs " << expected.size() << ")";
  check(report, label, pass, d.str());
}

void run_convergence(const ExperimentSpec& spec, const RunOptions& opt, RunReport& report) {
  const ConvergenceSweep& cs = spec.convergence;
  const int k = log2_exact(cs.factor);
  const bool time = cs.axis == SweepAxis::Time;
  const RunConfig& base = spec.run;

  auto level_config = [&](int exponent) {
    if (time) {
      RunConfig c = base;
      c.tau = base.tau / pow2(exponent);
      return c;
    }
    return with_grid_cells(base, base.grid.cells() * pow2(exponent));
  };

  std::vector<StateField> results(cs.levels + 2);
  std::vector<RunConfig> configs;
  for (int j = 0; j <= cs.levels; ++j) configs.push_back(level_config(j * k));
  configs.push_back(level_config(cs.reference_levels));

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const bool ref = i + 1 == configs.size();
    const std::string label = std::string(ref ? "reference " : "") + (time ? "tau=" + fmt(configs[i].tau)
                                                                           : "h=" + fmt(configs[i].grid.h()));
    jobs.push_back({label, [&, i] { results[i] = simulate(configs[i]); }});
  }
  auto records = run_jobs(jobs, opt.threads);
  report.runs.insert(report.runs.end(), records.begin(), records.end());
  if (!records.back().ok) return;

  const StateField& ref = results.back();
  std::vector<ErrorRow> rows;
  std::vector<std::pair<double, double>> for_slope;
  for (int j = 0; j <= cs.levels; ++j) {
    if (!records[j].ok) continue;
    const RunConfig& c = configs[j];
    const StateField r = time ? ref : restrict_state(ref, c.grid, cs.reference_levels - j * k);
    const ErrorTriple e =
        error_norms(pick(results[j], cs.field, c.params), pick(r, cs.field, c.params), c.grid.h(), c.grid.dim());
    const double sweep = time ? c.tau : c.grid.h();
    rows.push_back({sweep, e});
    for_slope.emplace_back(sweep, e.e_inf);
  }

  std::vector<std::optional<double>> oi, o2;
  write(report, opt, error_table(rows, &oi, &o2), spec.name + "_errors.csv");

  const Expectations& ex = spec.expect;
  check_orders(report, spec.name + " order_inf column", ex.orders_inf, oi, ex.order_tol);
  check_orders(report, spec.name + " order_2 column", ex.orders_2, o2, ex.order_tol);
  if (ex.anchor_sweep_value && ex.anchor_e_inf) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const ErrorRow& r) {
      return std::abs(r.sweep_value - *ex.anchor_sweep_value) <= 1e-9 * *ex.anchor_sweep_value;
    });
    if (it == rows.end()) {
      check(report, spec.name + " anchor e_inf", false, "no row at sweep value " + fmt(*ex.anchor_sweep_value));
    } else {
      const double rel = std::abs(it->e.e_inf - *ex.anchor_e_inf) / *ex.anchor_e_inf;
      check(report, spec.name + " anchor e_inf", rel <= ex.anchor_rel_tol,
            "e_inf " + fmt(it->e.e_inf) + " vs " + fmt(*ex.anchor_e_inf) + ", rel " + fmt(rel) + " <= " +
                fmt(ex.anchor_rel_tol));
    }
  }
  if (ex.slope_range) {
    const double slope = for_slope.size() >= 2 ? fitted_slope(for_slope) : NAN;
    check(report, spec.name + " fitted slope", slope >= ex.slope_range->first && slope <= ex.slope_range->second,
          "slope " + fmt(slope) + " in [" + fmt(ex.slope_range->first) + ", " + fmt(ex.slope_range->second) + "]");
  }
}

// Indices into step_times nearest to each requested time.
std::vector<std::size_t> snap_indices(const std::vector<double>& times, const std::vector<double>& requested) {
  std::vector<std::size_t> out;
  for (double t : requested) {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times.begin());
    if (k == times.size() || (k > 0 && t - times[k - 1] <= times[k] - t)) k = k > 0 ? k - 1 : 0;
    out.push_back(k);
  }
  return out;
}

void run_snapshots(const ExperimentSpec& spec, const RunOptions& opt, RunReport& report) {
  const RunConfig& c = spec.run;
  const auto times = step_times(c.tau, c.t_final);
  const auto wanted = snap_indices(times, c.snapshot_times);
  std::vector<StateField> snaps;
  double worst = 0.0;
  BoundConstants bounds;

  std::vector<Job> jobs{{"simulate", [&] {
                           bounds = bound_constants(c);
                           const StateField s0 = initial_state(c);
                           worst = bound_violation(s0, bounds.c_u, bounds.c_v);
                           auto keep = [&](std::size_t k, const StateField& s) {
                             for (std::size_t idx : wanted)
                               if (idx == k) snaps.push_back(s);
                           };
                           keep(0, s0);
                           simulate(c, [&](int k, const StateField& s) {
                             worst = std::max(worst, bound_violation(s, bounds.c_u, bounds.c_v));
                             keep(static_cast<std::size_t>(k), s);
                           });
                         }}};
  auto records = run_jobs(jobs, 1);
  report.runs.insert(report.runs.end(), records.begin(), records.end());
  if (!all_ok(records)) return;

  CsvTable fields(snapshot_header(c.grid.dim()));
  CsvTable iface({"t", "position", "width"});
  std::vector<InterfaceSample> fronts;
  for (const auto& s : snaps) {
    append_snapshot(fields, s, c.grid, c.params);
    fronts.push_back(locate_interface(s, c.grid, c.params));
    iface.add_row(std::vector<std::optional<double>>{s.t, fronts.back().position, fronts.back().width});
  }
  write(report, opt, fields, spec.name + "_snapshots.csv");
  write(report, opt, iface, spec.name + "_interface.csv");

  const Expectations& ex = spec.expect;
  if (ex.bounds) {
    check(report, spec.name + " bounds", worst <= 1e-12,
          "max violation " + fmt(worst) + " with C_u " + fmt(bounds.c_u) + ", C_v " + fmt(bounds.c_v));
  }
  if (ex.initial_w_monotone) {
    const StateField s0 = initial_state(c);
    const Field w = enthalpy(s0, c.params);
    const int n = c.grid.nodes_per_axis();
    bool mono = true;
    for (int j = 0; j < (c.grid.dim() == 2 ? n : 1); ++j)
      for (int i = 0; i + 1 < n; ++i) mono = mono && w(c.grid.index(i + 1, j)) >= w(c.grid.index(i, j));
    check(report, spec.name + " initial w monotone in x1", mono, mono ? "non-decreasing along every row" : "decreases");
  }
  if (ex.front_advances) {
    bool pass = fronts.size() >= 2;
    std::string d = "positions";
    for (std::size_t i = 0; i < fronts.size(); ++i) {
      d += " " + (fronts[i].position ? fmt(*fronts[i].position) : std::string("none"));
      if (i && !(fronts[i].position && fronts[i - 1].position && *fronts[i].position > *fronts[i - 1].position))
        pass = false;
    }
    check(report, spec.name + " front moves toward +x1", pass, d);
  }
}

void run_epsilon_sweep(const ExperimentSpec& spec, const RunOptions& opt, RunReport& report) {
  const std::size_t m = spec.epsilons.size();
  std::vector<RunConfig> configs(m, spec.run);
  std::vector<StateField> results(m);
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < m; ++i) {
    configs[i].params.epsilon = spec.epsilons[i];
    jobs.push_back({"epsilon=" + fmt(spec.epsilons[i]), [&, i] { results[i] = simulate(configs[i]); }});
  }
  auto records = run_jobs(jobs, opt.threads);
  report.runs.insert(report.runs.end(), records.begin(), records.end());

  CsvTable profiles(snapshot_header(spec.run.grid.dim(), {"epsilon"}));
  CsvTable iface({"epsilon", "t", "position", "width"});
  std::vector<double> widths;
  for (std::size_t i = 0; i < m; ++i) {
    if (!records[i].ok) continue;
    append_snapshot(profiles, results[i], configs[i].grid, configs[i].params, {spec.epsilons[i]});
    const auto f = locate_interface(results[i], configs[i].grid, configs[i].params);
    widths.push_back(f.width);
    iface.add_row(std::vector<std::optional<double>>{spec.epsilons[i], results[i].t, f.position, f.width});
  }
  write(report, opt, profiles, spec.name + "_profiles.csv");
  write(report, opt, iface, spec.name + "_interface.csv");

  if (spec.expect.width_strictly_decreasing) {
    bool pass = all_ok(records) && widths.size() == m;
    std::string d = "widths";
    for (std::size_t i = 0; i < widths.size(); ++i) {
      d += " " + fmt(widths[i]);
      if (i && !(widths[i] < widths[i - 1])) pass = false;
    }
    check(report, spec.name + " interface width strictly decreasing", pass, d);
  }
}

void run_comparison(const ExperimentSpec& spec, const RunOptions& opt, RunReport& report) {
  const ComparisonSweep& cs = spec.comparison;
  const int k = log2_exact(cs.factor);
  struct Pair {
    RunConfig semi, full;
    StateField a, b;
  };
  std::vector<Pair> pairs;
  for (double eps : spec.epsilons) {
    for (int j = 0; j <= cs.levels; ++j) {
      RunConfig c = spec.run;
      c.params.epsilon = eps;
      c.tau = spec.run.tau / pow2(j * k);
      const double h = cs.coupling == Coupling::TauOverH2 ? std::sqrt(c.tau / cs.ratio) : c.tau / cs.ratio;
      const int cells = std::max(2, static_cast<int>(std::lround((c.grid.b() - c.grid.a()) / h)));
      c = with_grid_cells(c, cells);
      c.scheme = Scheme::SemiImplicit1;
      RunConfig f = c;
      f.scheme = Scheme::FullyImplicit;
      pairs.push_back({c, f, {}, {}});
    }
  }
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string tag = "epsilon=" + fmt(pairs[i].semi.params.epsilon) + " tau=" + fmt(pairs[i].semi.tau);
    jobs.push_back({tag + " semi_implicit", [&, i] { pairs[i].a = simulate(pairs[i].semi); }});
    jobs.push_back({tag + " fully_implicit", [&, i] { pairs[i].b = simulate(pairs[i].full); }});
  }
  auto records = run_jobs(jobs, opt.threads);
  report.runs.insert(report.runs.end(), records.begin(), records.end());

  const std::size_t per = static_cast<std::size_t>(cs.levels) + 1;
  for (std::size_t e = 0; e < spec.epsilons.size(); ++e) {
    std::vector<ErrorRow> rows;
    bool complete = true;
    for (std::size_t j = 0; j < per; ++j) {
      const std::size_t i = e * per + j;
      if (!records[2 * i].ok || !records[2 * i + 1].ok) {
        complete = false;
        continue;
      }
      const Pair& p = pairs[i];
      rows.push_back({p.semi.tau, error_norms(pick(p.a, cs.field, p.semi.params), pick(p.b, cs.field, p.semi.params),
                                              p.semi.grid.h(), p.semi.grid.dim())});
    }
    const std::string eps = fmt(spec.epsilons[e]);
    write(report, opt, error_table(rows), spec.name + "_errors_eps" + eps + ".csv");
    if (spec.expect.error_decreasing) {
      std::sort(rows.begin(), rows.end(), [](const ErrorRow& a, const ErrorRow& b) { return a.sweep_value > b.sweep_value; });
      bool pass = complete && rows.size() >= 2;
      std::string d = "e_1 by decreasing tau";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        d += " " + fmt(rows[i].e.e_1);
        if (i && !(rows[i].e.e_1 < rows[i - 1].e.e_1)) pass = false;
      }
      check(report, spec.name + " e_1 decreases with tau at epsilon=" + eps, pass, d);
    }
  }
}

void run_growth(const ExperimentSpec& spec, const RunOptions& opt, RunReport& report) {
  const GrowthSampling& g = spec.growth;
  CsvTable table({"case", "phi", "r", "r_eps", "root1", "root2", "root3"});
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return std::exp(std::log(lo) + unit(rng) * std::log(hi / lo)); };

  bool in_range = true;
  bool s2_strict = true;
  long long count = 0;
  const auto start = std::chrono::steady_clock::now();
  const char* names[3] = {"S1", "S2", "S3"};
  for (int c = 0; c < 3; ++c) {
    for (int n = 0; n < g.samples; ++n) {
      GrowthFactorQuery q;
      q.r = log_uniform(g.r_min, g.r_max);
      q.r_eps = log_uniform(g.r_eps_min, g.r_eps_max);
      q.phi = 2.0 * std::numbers::pi * unit(rng);
      q.lambda = spec.run.params.lambda;
      q.d1 = spec.run.params.d1;
      q.d2 = spec.run.params.d2;
      const double level = g.state_max * (1.0 - unit(rng));  // (0, state_max]
      q.limit = c == 0 ? LimitState::s1(level) : c == 1 ? LimitState::s2(level) : LimitState::s3(unit(rng));
      const auto roots = growth_factors(q);
      for (double r : roots) {
        in_range = in_range && r > 0.0 && r <= 1.0;
        if (c == 1) s2_strict = s2_strict && r < 1.0;
      }
      ++count;
      table.add_row({names[c], fmt(q.phi), fmt(q.r), fmt(q.r_eps), fmt(roots[0]), fmt(roots[1]), fmt(roots[2])});
    }
  }
  report.runs.push_back(
      {"growth factor queries", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), true, {}});
  write(report, opt, table, spec.name + "_growth.csv");
  if (spec.expect.roots_in_unit_interval) {
    check(report, spec.name + " roots in (0, 1]", in_range, std::to_string(count) + " queries");
    check(report, spec.name + " S2 roots < 1", s2_strict, std::to_string(g.samples) + " queries with u* > 0");
  }
}

}  // namespace

bool RunReport::solver_failed() const { return !all_ok(runs); }

bool RunReport::checks_failed() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; });
}

RunReport run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  if (auto issues = validate(spec); !issues.empty()) throw ConfigError(std::move(issues));
  std::filesystem::create_directories(options.out_dir);
  RunReport report;
  switch (spec.kind) {
    case ExperimentKind::Convergence: run_convergence(spec, options, report); break;
    case ExperimentKind::Snapshots: run_snapshots(spec, options, report); break;
    case ExperimentKind::EpsilonSweep: run_epsilon_sweep(spec, options, report); break;
    case ExperimentKind::ImplicitComparison: run_comparison(spec, options, report); break;
    case ExperimentKind::GrowthFactors: run_growth(spec, options, report); break;
  }
  return report;
}

}  // namespace fastrd
