#include "fastrd/run.hpp"

#include "fastrd/sirk2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastrd {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::SemiImplicit1: return "semi_implicit";
    case Scheme::SIRK2: return "sirk2";
    case Scheme::FullyImplicit: return "fully_implicit";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "semi_implicit") return Scheme::SemiImplicit1;
  if (name == "sirk2") return Scheme::SIRK2;
  if (name == "fully_implicit") return Scheme::FullyImplicit;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::vector<std::string> RunConfig::violations() const {
  std::vector<std::string> out = params.violations();
  if (!(tau > 0.0)) out.push_back("tau must be > 0");
  if (!(t_final >= tau)) out.push_back("t_final must be >= tau");
  if (const auto* preset = std::get_if<InitialPreset>(&initial)) {
    if (preset_dimension(*preset) != grid.dim()) {
      out.push_back("initial preset " + preset_name(*preset) + " needs grid.dim = " +
                    std::to_string(preset_dimension(*preset)));
    }
  } else {
    const auto& tab = std::get<TabulatedState>(initial);
    const auto n = static_cast<std::size_t>(grid.size());
    if (tab.u.size() != n || tab.v.size() != n || tab.p.size() != n) {
      out.push_back("initial arrays must have " + std::to_string(n) + " entries");
    }
  }
  for (double t : snapshot_times) {
    if (t < 0.0 || t > t_final) {
      out.push_back("snapshot_times entries must lie in [0, t_final]");
      break;
    }
  }
  if (!(solver.cg_tol > 0.0)) out.push_back("solver.cg_tol must be > 0");
  if (!(fixed_point.tol > 0.0)) out.push_back("fixed_point.tol must be > 0");
  if (fixed_point.max_sweeps < 1) out.push_back("fixed_point.max_sweeps must be >= 1");
  return out;
}

std::vector<double> step_times(double tau, double t_final) {
  if (!(tau > 0.0) || !(t_final > 0.0)) throw std::invalid_argument("step_times needs tau, t_final > 0");
  const double ratio = t_final / tau;
  auto n = static_cast<long long>(std::llround(ratio));
  const bool exact = std::abs(static_cast<double>(n) * tau - t_final) <= 1e-9 * tau;
  if (!exact) n = static_cast<long long>(std::ceil(ratio));
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (long long k = 0; k <= n; ++k) t[k] = std::min(static_cast<double>(k) * tau, t_final);
  t.back() = t_final;
  return t;
}

StateField initial_state(const RunConfig& config) {
  if (const auto* preset = std::get_if<InitialPreset>(&config.initial)) {
    return make_initial_state(*preset, config.grid, config.params);
  }
  const auto& tab = std::get<TabulatedState>(config.initial);
  const auto n = config.grid.size();
  if (static_cast<Eigen::Index>(tab.u.size()) != n || static_cast<Eigen::Index>(tab.v.size()) != n ||
      static_cast<Eigen::Index>(tab.p.size()) != n) {
    throw std::invalid_argument("tabulated initial state does not match the grid");
  }
  StateField s;
  s.u = Eigen::Map<const Field>(tab.u.data(), n);
  s.v = Eigen::Map<const Field>(tab.v.data(), n);
  s.p = Eigen::Map<const Field>(tab.p.data(), n);
  s.t = 0.0;
  return s;
}

namespace {

double largest_datum(const FieldBoundary& b, const Grid& grid, double t_final) {
  double m = 0.0;
  const int faces = grid.dim() == 1 ? 2 : 4;
  for (int f = 0; f < faces; ++f) {
    const FaceCondition& c = b.faces[f];
    if (!c.is_dirichlet()) continue;
    // Affine data peaks at a corner of [0, t_final] x [a, b].
    for (double t : {0.0, t_final})
      for (double s : {grid.a(), grid.b()}) m = std::max(m, c.data.at(t, grid.dim() == 1 ? 0.0 : s));
  }
  return m;
}

}  // namespace

BoundConstants bound_constants(const RunConfig& config) {
  const StateField s = initial_state(config);
  return {std::max(s.u.maxCoeff(), largest_datum(config.boundary.u, config.grid, config.t_final)),
          std::max(s.v.maxCoeff(), largest_datum(config.boundary.v, config.grid, config.t_final))};
}

StateField advance(const StateField& state, const RunConfig& config, double t_next, StepWorkspace* workspace) {
  const double tau = t_next - state.t;
  StateField next;
  switch (config.scheme) {
    case Scheme::SemiImplicit1:
      next = step(state, config.params, tau, config.grid, config.boundary, config.solver, workspace);
      break;
    case Scheme::SIRK2:
      next = sirk2_step(state, config.params, tau, config.grid, config.boundary, ButcherPair::second_order(),
                        config.solver);
      break;
    case Scheme::FullyImplicit:
      next = fully_implicit_step(state, config.params, tau, config.grid, config.boundary, config.fixed_point,
                                 config.solver);
      break;
  }
  next.t = t_next;
  return next;
}

StateField simulate(const RunConfig& config, const StepObserver& observer) {
  const auto times = step_times(config.tau, config.t_final);
  StateField state = initial_state(config);
  StepWorkspace ws;
  for (std::size_t k = 1; k < times.size(); ++k) {
    state = advance(state, config, times[k], &ws);
    if (observer) observer(static_cast<int>(k), state);
  }
  return state;
}

}  // namespace fastrd
