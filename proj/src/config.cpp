#include "fastrd/experiment.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

namespace fastrd {

using nlohmann::json;

namespace {

std::string join_key(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += (out.empty() ? "" : "\n") + l;
  return out;
}

bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

// Collects every problem instead of stopping at the first.
class Reader {
public:
  std::vector<std::string> diagnostics;

  void fail(const std::string& key, const std::string& msg) { diagnostics.push_back(key + ": " + msg); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path.empty() ? "<root>" : path, "expected an object");
    return false;
  }

  void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) return;
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : j.items())
      if (!ok.count(k)) fail(join_key(path, k), "unknown key");
  }

  void number(const json& j, const std::string& path, const char* key, double& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (v.is_number()) out = v.get<double>();
    else fail(join_key(path, key), "expected a number");
  }

  void integer(const json& j, const std::string& path, const char* key, int& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (v.is_number_integer()) out = v.get<int>();
    else fail(join_key(path, key), "expected an integer");
  }

  void unsigned_integer(const json& j, const std::string& path, const char* key, unsigned long long& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (v.is_number_unsigned()) out = v.get<unsigned long long>();
    else fail(join_key(path, key), "expected a non-negative integer");
  }

  void boolean(const json& j, const std::string& path, const char* key, bool& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (v.is_boolean()) out = v.get<bool>();
    else fail(join_key(path, key), "expected true or false");
  }

  void text(const json& j, const std::string& path, const char* key, std::string& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (v.is_string()) out = v.get<std::string>();
    else fail(join_key(path, key), "expected a string");
  }

  void numbers(const json& j, const std::string& path, const char* key, std::vector<double>& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
      fail(join_key(path, key), "expected an array of numbers");
      return;
    }
    out = v.get<std::vector<double>>();
  }

  template <class Enum>
  void choice(const json& j, const std::string& path, const char* key, Enum& out,
              std::initializer_list<std::pair<const char*, Enum>> names) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    std::string allowed;
    for (const auto& [n, e] : names) {
      if (v.is_string() && v.get<std::string>() == n) {
        out = e;
        return;
      }
      allowed += (allowed.empty() ? "" : ", ") + std::string(n);
    }
    fail(join_key(path, key), "expected one of " + allowed);
  }
};

const std::initializer_list<std::pair<const char*, ExperimentKind>> kKinds = {
    {"convergence", ExperimentKind::Convergence},
    {"snapshots", ExperimentKind::Snapshots},
    {"epsilon_sweep", ExperimentKind::EpsilonSweep},
    {"implicit_comparison", ExperimentKind::ImplicitComparison},
    {"growth_factors", ExperimentKind::GrowthFactors}};
const std::initializer_list<std::pair<const char*, SweepAxis>> kAxes = {{"tau", SweepAxis::Time},
                                                                         {"h", SweepAxis::Space}};
const std::initializer_list<std::pair<const char*, ErrorField>> kFields = {
    {"u", ErrorField::U}, {"v", ErrorField::V}, {"p", ErrorField::P}, {"w", ErrorField::W}};
const std::initializer_list<std::pair<const char*, Coupling>> kCouplings = {{"tau_over_h2", Coupling::TauOverH2},
                                                                             {"tau_over_h", Coupling::TauOverH}};
const std::initializer_list<std::pair<const char*, Scheme>> kSchemes = {{"semi_implicit", Scheme::SemiImplicit1},
                                                                         {"sirk2", Scheme::SIRK2},
                                                                         {"fully_implicit", Scheme::FullyImplicit}};
const char* kFaceKeys[4] = {"x_low", "x_high", "y_low", "y_high"};

template <class Enum>
std::string name_of(Enum e, std::initializer_list<std::pair<const char*, Enum>> names) {
  for (const auto& [n, v] : names)
    if (v == e) return n;
  return "unknown";
}

std::optional<InitialPreset> read_preset(Reader& rd, const json& j, const std::string& path) {
  std::string name;
  rd.text(j, path, "preset", name);
  if (name == "case1_cosine") {
    rd.only_keys(j, path, {"preset", "L", "eps0"});
    Case1Cosine p;
    rd.number(j, path, "L", p.L);
    rd.number(j, path, "eps0", p.eps0);
    return p;
  }
  if (name == "case2_jump" || name == "limit_test") {
    rd.only_keys(j, path, {"preset", "L", "theta", "stefan"});
    double L = 1.0, theta = 0.05, stefan = 0.25;
    rd.number(j, path, "L", L);
    rd.number(j, path, "theta", theta);
    rd.number(j, path, "stefan", stefan);
    if (name == "case2_jump") return Case2Jump{L, theta, stefan};
    return LimitTest{L, theta, stefan};
  }
  if (name == "two_d") {
    rd.only_keys(j, path, {"preset", "L", "theta", "stefan", "melt"});
    TwoD p;
    rd.number(j, path, "L", p.L);
    rd.number(j, path, "theta", p.theta);
    rd.number(j, path, "stefan", p.stefan);
    rd.number(j, path, "melt", p.melt);
    return p;
  }
  rd.fail(join_key(path, "preset"), "unknown preset '" + name + "'");
  return std::nullopt;
}

json write_preset(const InitialPreset& preset) {
  json j{{"preset", preset_name(preset)}};
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        j["L"] = p.L;
        if constexpr (std::is_same_v<T, Case1Cosine>) {
          j["eps0"] = p.eps0;
        } else {
          j["theta"] = p.theta;
          j["stefan"] = p.stefan;
          if constexpr (std::is_same_v<T, TwoD>) j["melt"] = p.melt;
        }
      },
      preset);
  return j;
}

FieldBoundary read_field_boundary(Reader& rd, const json& j, const std::string& path) {
  FieldBoundary b;
  if (!rd.object(j, path)) return b;
  rd.only_keys(j, path, {"x_low", "x_high", "y_low", "y_high"});
  for (int f = 0; f < 4; ++f) {
    if (!j.contains(kFaceKeys[f])) continue;
    const std::string fp = join_key(path, kFaceKeys[f]);
    const json& face = j.at(kFaceKeys[f]);
    if (!rd.object(face, fp)) continue;
    rd.only_keys(face, fp, {"kind", "value", "slope", "rate"});
    FaceCondition::Kind kind = FaceCondition::Kind::Neumann;
    rd.choice(face, fp, "kind", kind,
              {{"dirichlet", FaceCondition::Kind::Dirichlet}, {"neumann", FaceCondition::Kind::Neumann}});
    if (kind == FaceCondition::Kind::Dirichlet) {
      DirichletValue d;
      rd.number(face, fp, "value", d.value);
      rd.number(face, fp, "slope", d.slope);
      rd.number(face, fp, "rate", d.rate);
      b.faces[f] = {kind, d};
    } else {
      if (face.contains("value") || face.contains("slope") || face.contains("rate"))
        rd.fail(fp, "neumann faces take no value, slope or rate");
      b.faces[f] = FaceCondition::neumann();
    }
  }
  return b;
}

json write_field_boundary(const FieldBoundary& b) {
  json j = json::object();
  for (int f = 0; f < 4; ++f) {
    const FaceCondition& c = b.faces[f];
    if (c.is_dirichlet()) {
      j[kFaceKeys[f]] = {{"kind", "dirichlet"}, {"value", c.data.value}, {"slope", c.data.slope},
                         {"rate", c.data.rate}};
    } else {
      j[kFaceKeys[f]] = {{"kind", "neumann"}};
    }
  }
  return j;
}

void read_expect(Reader& rd, const json& j, Expectations& e) {
  const std::string path = "expect";
  if (!rd.object(j, path)) return;
  rd.only_keys(j, path,
               {"orders_inf", "orders_2", "order_tol", "anchor", "slope_range", "width_strictly_decreasing",
                "error_decreasing", "bounds", "front_advances", "initial_w_monotone", "roots_in_unit_interval"});
  rd.numbers(j, path, "orders_inf", e.orders_inf);
  rd.numbers(j, path, "orders_2", e.orders_2);
  rd.number(j, path, "order_tol", e.order_tol);
  if (j.contains("anchor")) {
    const json& a = j.at("anchor");
    const std::string ap = "expect.anchor";
    if (rd.object(a, ap)) {
      rd.only_keys(a, ap, {"sweep_value", "e_inf", "rel_tol"});
      if (!a.contains("sweep_value") || !a.contains("e_inf")) rd.fail(ap, "needs sweep_value and e_inf");
      double sv = 0.0, ev = 0.0;
      rd.number(a, ap, "sweep_value", sv);
      rd.number(a, ap, "e_inf", ev);
      rd.number(a, ap, "rel_tol", e.anchor_rel_tol);
      e.anchor_sweep_value = sv;
      e.anchor_e_inf = ev;
    }
  }
  if (j.contains("slope_range")) {
    std::vector<double> r;
    rd.numbers(j, path, "slope_range", r);
    if (r.size() == 2) e.slope_range = std::make_pair(r[0], r[1]);
    else rd.fail("expect.slope_range", "expected [low, high]");
  }
  rd.boolean(j, path, "width_strictly_decreasing", e.width_strictly_decreasing);
  rd.boolean(j, path, "error_decreasing", e.error_decreasing);
  rd.boolean(j, path, "bounds", e.bounds);
  rd.boolean(j, path, "front_advances", e.front_advances);
  rd.boolean(j, path, "initial_w_monotone", e.initial_w_monotone);
  rd.boolean(j, path, "roots_in_unit_interval", e.roots_in_unit_interval);
}

json write_expect(const Expectations& e) {
  json j{{"orders_inf", e.orders_inf},
         {"orders_2", e.orders_2},
         {"order_tol", e.order_tol},
         {"width_strictly_decreasing", e.width_strictly_decreasing},
         {"error_decreasing", e.error_decreasing},
         {"bounds", e.bounds},
         {"front_advances", e.front_advances},
         {"initial_w_monotone", e.initial_w_monotone},
         {"roots_in_unit_interval", e.roots_in_unit_interval}};
  if (e.anchor_sweep_value && e.anchor_e_inf) {
    j["anchor"] = {{"sweep_value", *e.anchor_sweep_value}, {"e_inf", *e.anchor_e_inf}, {"rel_tol", e.anchor_rel_tol}};
  }
  if (e.slope_range) j["slope_range"] = {e.slope_range->first, e.slope_range->second};
  return j;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error(join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string kind_name(ExperimentKind k) { return name_of(k, kKinds); }

std::vector<std::string> validate(const ExperimentSpec& s) {
  std::vector<std::string> out;
  if (s.name.empty()) out.push_back("name: must not be empty");
  if (s.name.find_first_of("/\\ ") != std::string::npos) out.push_back("name: must not contain spaces or slashes");

  const RunConfig& run = s.run;
  for (const auto& v : run.params.violations()) out.push_back("model." + v);
  const std::size_t skip = run.params.violations().size();
  const auto run_issues = run.violations();
  for (std::size_t i = skip; i < run_issues.size(); ++i) {
    const std::string& v = run_issues[i];
    const bool timing = v.rfind("tau", 0) == 0 || v.rfind("t_final", 0) == 0 || v.rfind("snapshot_times", 0) == 0;
    out.push_back(timing ? "time." + v : v);
  }
  if (const auto* preset = std::get_if<InitialPreset>(&run.initial)) {
    const double L = std::visit([](const auto& p) { return p.L; }, *preset);
    if (!(L > 0.0) || run.grid.a() != -L || run.grid.b() != L)
      out.push_back("initial.L must match the grid domain [a, b] = [-L, L]");
  }

  const auto power_rule = [&out](const std::string& key, int factor) {
    if (!power_of_two(factor))
      out.push_back(key + " must be a power of 2 (got " + std::to_string(factor) + ") so refinements nest");
  };

  switch (s.kind) {
    case ExperimentKind::Convergence: {
      const ConvergenceSweep& c = s.convergence;
      power_rule("convergence.factor", c.factor);
      if (c.levels < 1) out.push_back("convergence.levels must be >= 1");
      if (power_of_two(c.factor) && c.reference_levels <= c.levels * log2_exact(c.factor))
        out.push_back("convergence.reference_levels must exceed the finest sweep level");
      if (c.reference_levels > 20) out.push_back("convergence.reference_levels must be <= 20");
      if (c.axis == SweepAxis::Space && c.reference_levels <= 20 &&
          static_cast<long long>(run.grid.cells()) << c.reference_levels > (1LL << 24))
        out.push_back("convergence.reference_levels refines grid.cells beyond 2^24");
      break;
    }
    case ExperimentKind::Snapshots:
      if (run.snapshot_times.empty()) out.push_back("time.snapshot_times must list at least one time");
      break;
    case ExperimentKind::EpsilonSweep:
    case ExperimentKind::ImplicitComparison:
      if (s.epsilons.empty()) out.push_back("epsilons must list at least one value");
      for (double e : s.epsilons)
        if (!(e > 0.0)) {
          out.push_back("epsilons entries must be > 0");
          break;
        }
      if (s.kind == ExperimentKind::ImplicitComparison) {
        power_rule("comparison.factor", s.comparison.factor);
        if (s.comparison.levels < 1) out.push_back("comparison.levels must be >= 1");
        if (!(s.comparison.ratio > 0.0)) out.push_back("comparison.ratio must be > 0");
      }
      break;
    case ExperimentKind::GrowthFactors: {
      const GrowthSampling& g = s.growth;
      if (g.samples < 1) out.push_back("growth.samples must be >= 1");
      if (!(g.r_min > 0.0 && g.r_max >= g.r_min)) out.push_back("growth.r_min must satisfy 0 < r_min <= r_max");
      if (!(g.r_eps_min > 0.0 && g.r_eps_max >= g.r_eps_min))
        out.push_back("growth.r_eps_min must satisfy 0 < r_eps_min <= r_eps_max");
      if (!(g.state_max > 0.0)) out.push_back("growth.state_max must be > 0");
      break;
    }
  }
  if (s.expect.slope_range && !(s.expect.slope_range->first <= s.expect.slope_range->second))
    out.push_back("expect.slope_range must be [low, high] with low <= high");
  if (!(s.expect.order_tol >= 0.0)) out.push_back("expect.order_tol must be >= 0");
  return out;
}

ExperimentSpec parse_spec(const json& j) {
  Reader rd;
  ExperimentSpec s;
  if (!rd.object(j, "")) throw ConfigError(rd.diagnostics);
  rd.only_keys(j, "",
               {"name", "kind", "model", "grid", "initial", "boundary", "time", "solver", "fixed_point",
                "convergence", "comparison", "epsilons", "growth", "expect"});
  if (!j.contains("name")) rd.fail("name", "required");
  if (!j.contains("kind")) rd.fail("kind", "required");
  rd.text(j, "", "name", s.name);
  rd.choice(j, "", "kind", s.kind, kKinds);

  RunConfig& run = s.run;
  if (j.contains("model") && rd.object(j["model"], "model")) {
    const json& m = j["model"];
    rd.only_keys(m, "model", {"epsilon", "lambda", "d1", "d2"});
    rd.number(m, "model", "epsilon", run.params.epsilon);
    rd.number(m, "model", "lambda", run.params.lambda);
    rd.number(m, "model", "d1", run.params.d1);
    rd.number(m, "model", "d2", run.params.d2);
  }

  if (j.contains("grid") && rd.object(j["grid"], "grid")) {
    const json& g = j["grid"];
    rd.only_keys(g, "grid", {"dim", "a", "b", "cells"});
    int dim = run.grid.dim(), cells = run.grid.cells();
    double a = run.grid.a(), b = run.grid.b();
    rd.integer(g, "grid", "dim", dim);
    rd.number(g, "grid", "a", a);
    rd.number(g, "grid", "b", b);
    rd.integer(g, "grid", "cells", cells);
    bool ok = true;
    if (dim != 1 && dim != 2) ok = false, rd.fail("grid.dim", "must be 1 or 2");
    if (!(b > a)) ok = false, rd.fail("grid.b", "must exceed grid.a");
    if (cells < 2) ok = false, rd.fail("grid.cells", "must be >= 2");
    if (ok) run.grid = Grid(dim, a, b, cells);
  }

  std::optional<InitialPreset> preset;
  if (!j.contains("initial")) {
    preset = std::get<InitialPreset>(run.initial);
  } else if (rd.object(j["initial"], "initial")) {
    const json& ini = j["initial"];
    if (ini.contains("tabulated")) {
      rd.only_keys(ini, "initial", {"tabulated"});
      const json& t = ini["tabulated"];
      if (rd.object(t, "initial.tabulated")) {
        rd.only_keys(t, "initial.tabulated", {"u", "v", "p"});
        TabulatedState tab;
        rd.numbers(t, "initial.tabulated", "u", tab.u);
        rd.numbers(t, "initial.tabulated", "v", tab.v);
        rd.numbers(t, "initial.tabulated", "p", tab.p);
        run.initial = tab;
      }
    } else {
      preset = read_preset(rd, ini, "initial");
      if (preset) run.initial = *preset;
    }
  }

  const bool preset_boundary_requested =
      !j.contains("boundary") || (j["boundary"].is_string() && j["boundary"] == "preset");
  if (preset_boundary_requested) {
    if (preset) run.boundary = preset_boundary(*preset, run.params);
    else if (!j.contains("boundary")) rd.fail("boundary", "required when the initial state is tabulated");
  } else if (rd.object(j["boundary"], "boundary")) {
    const json& b = j["boundary"];
    rd.only_keys(b, "boundary", {"u", "v"});
    if (b.contains("u")) run.boundary.u = read_field_boundary(rd, b["u"], "boundary.u");
    if (b.contains("v")) run.boundary.v = read_field_boundary(rd, b["v"], "boundary.v");
  }

  if (j.contains("time") && rd.object(j["time"], "time")) {
    const json& t = j["time"];
    rd.only_keys(t, "time", {"tau", "t_final", "scheme", "snapshot_times"});
    rd.number(t, "time", "tau", run.tau);
    rd.number(t, "time", "t_final", run.t_final);
    rd.choice(t, "time", "scheme", run.scheme, kSchemes);
    rd.numbers(t, "time", "snapshot_times", run.snapshot_times);
  }
  if (j.contains("solver") && rd.object(j["solver"], "solver")) {
    const json& o = j["solver"];
    rd.only_keys(o, "solver", {"cg_tol", "cg_max_iter"});
    rd.number(o, "solver", "cg_tol", run.solver.cg_tol);
    rd.integer(o, "solver", "cg_max_iter", run.solver.cg_max_iter);
  }
  if (j.contains("fixed_point") && rd.object(j["fixed_point"], "fixed_point")) {
    const json& o = j["fixed_point"];
    rd.only_keys(o, "fixed_point", {"tol", "max_sweeps"});
    rd.number(o, "fixed_point", "tol", run.fixed_point.tol);
    rd.integer(o, "fixed_point", "max_sweeps", run.fixed_point.max_sweeps);
  }

  if (j.contains("convergence") && rd.object(j["convergence"], "convergence")) {
    const json& c = j["convergence"];
    const std::string p = "convergence";
    rd.only_keys(c, p, {"axis", "factor", "levels", "reference_levels", "field"});
    rd.choice(c, p, "axis", s.convergence.axis, kAxes);
    rd.integer(c, p, "factor", s.convergence.factor);
    rd.integer(c, p, "levels", s.convergence.levels);
    rd.integer(c, p, "reference_levels", s.convergence.reference_levels);
    rd.choice(c, p, "field", s.convergence.field, kFields);
  }
  if (j.contains("comparison") && rd.object(j["comparison"], "comparison")) {
    const json& c = j["comparison"];
    const std::string p = "comparison";
    rd.only_keys(c, p, {"factor", "levels", "coupling", "ratio", "field"});
    rd.integer(c, p, "factor", s.comparison.factor);
    rd.integer(c, p, "levels", s.comparison.levels);
    rd.choice(c, p, "coupling", s.comparison.coupling, kCouplings);
    rd.number(c, p, "ratio", s.comparison.ratio);
    rd.choice(c, p, "field", s.comparison.field, kFields);
  }
  rd.numbers(j, "", "epsilons", s.epsilons);
  if (j.contains("growth") && rd.object(j["growth"], "growth")) {
    const json& g = j["growth"];
    const std::string p = "growth";
    rd.only_keys(g, p, {"samples", "seed", "r_min", "r_max", "r_eps_min", "r_eps_max", "state_max"});
    rd.integer(g, p, "samples", s.growth.samples);
    rd.unsigned_integer(g, p, "seed", s.growth.seed);
    rd.number(g, p, "r_min", s.growth.r_min);
    rd.number(g, p, "r_max", s.growth.r_max);
    rd.number(g, p, "r_eps_min", s.growth.r_eps_min);
    rd.number(g, p, "r_eps_max", s.growth.r_eps_max);
    rd.number(g, p, "state_max", s.growth.state_max);
  }
  if (j.contains("expect")) read_expect(rd, j["expect"], s.expect);

  if (!rd.diagnostics.empty()) throw ConfigError(rd.diagnostics);
  auto issues = validate(s);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return s;
}

json serialize_spec(const ExperimentSpec& s) {
  const RunConfig& run = s.run;
  json j;
  j["name"] = s.name;
  j["kind"] = kind_name(s.kind);
  j["model"] = {{"epsilon", run.params.epsilon}, {"lambda", run.params.lambda}, {"d1", run.params.d1},
                {"d2", run.params.d2}};
  j["grid"] = {{"dim", run.grid.dim()}, {"a", run.grid.a()}, {"b", run.grid.b()}, {"cells", run.grid.cells()}};
  if (const auto* preset = std::get_if<InitialPreset>(&run.initial)) {
    j["initial"] = write_preset(*preset);
  } else {
    const auto& tab = std::get<TabulatedState>(run.initial);
    j["initial"] = {{"tabulated", {{"u", tab.u}, {"v", tab.v}, {"p", tab.p}}}};
  }
  j["boundary"] = {{"u", write_field_boundary(run.boundary.u)}, {"v", write_field_boundary(run.boundary.v)}};
  j["time"] = {{"tau", run.tau},
               {"t_final", run.t_final},
               {"scheme", name_of(run.scheme, kSchemes)},
               {"snapshot_times", run.snapshot_times}};
  j["solver"] = {{"cg_tol", run.solver.cg_tol}, {"cg_max_iter", run.solver.cg_max_iter}};
  j["fixed_point"] = {{"tol", run.fixed_point.tol}, {"max_sweeps", run.fixed_point.max_sweeps}};
  j["convergence"] = {{"axis", name_of(s.convergence.axis, kAxes)},
                      {"factor", s.convergence.factor},
                      {"levels", s.convergence.levels},
                      {"reference_levels", s.convergence.reference_levels},
                      {"field", name_of(s.convergence.field, kFields)}};
  j["comparison"] = {{"factor", s.comparison.factor},
                     {"levels", s.comparison.levels},
                     {"coupling", name_of(s.comparison.coupling, kCouplings)},
                     {"ratio", s.comparison.ratio},
                     {"field", name_of(s.comparison.field, kFields)}};
  j["epsilons"] = s.epsilons;
  j["growth"] = {{"samples", s.growth.samples},     {"seed", s.growth.seed},
                 {"r_min", s.growth.r_min},         {"r_max", s.growth.r_max},
                 {"r_eps_min", s.growth.r_eps_min}, {"r_eps_max", s.growth.r_eps_max},
                 {"state_max", s.growth.state_max}};
  j["expect"] = write_expect(s.expect);
  return j;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("<file>: ") + e.what()});
  }
  return parse_spec(j);
}

ValidationResult validate_config(const std::string& path) {
  ValidationResult r;
  try {
    r.spec = load_spec(path);
  } catch (const ConfigError& e) {
    r.diagnostics = e.diagnostics();
  }
  return r;
}

std::string preset_directory() {
  if (const char* env = std::getenv("FASTRD_PRESET_DIR"); env && *env) return env;
  return FASTRD_PRESET_DIR;
}

std::vector<std::string> list_presets() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(preset_directory(), ec))
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

std::string preset_path(const std::string& name) {
  const auto p = std::filesystem::path(preset_directory()) / (name + ".json");
  if (!std::filesystem::exists(p)) throw ConfigError({"preset: unknown preset '" + name + "'"});
  return p.string();
}

}  // namespace fastrd
