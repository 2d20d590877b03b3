#pragma once

#include "fastrd/fully_implicit.hpp"
#include "fastrd/implicit_diffusion.hpp"
#include "fastrd/model.hpp"
#include "fastrd/semi_implicit.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace fastrd {

enum class Scheme { SemiImplicit1, SIRK2, FullyImplicit };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

/// Tabulated u, v, p over every node of the run's grid.
struct TabulatedState {
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> p;
  bool operator==(const TabulatedState&) const = default;
};

using InitialCondition = std::variant<InitialPreset, TabulatedState>;

struct RunConfig {
  ModelParams params;
  Grid grid{1, -1.0, 1.0, 2};
  BoundarySpec boundary;
  InitialCondition initial = Case1Cosine{};
  double tau = 1e-3;
  double t_final = 1e-3;
  Scheme scheme = Scheme::SemiImplicit1;
  std::vector<double> snapshot_times;
  SolverOptions solver;
  FixedPointConfig fixed_point;

  std::vector<std::string> violations() const;
  bool operator==(const RunConfig&) const = default;
};

/// Upper bounds C_u, C_v of the bound-preservation statement: the largest
/// initial value or Dirichlet datum of each field over [0, t_final].
struct BoundConstants {
  double c_u = 0.0;
  double c_v = 0.0;
};
BoundConstants bound_constants(const RunConfig& config);

/// Step times t_0 = 0 < t_1 < ... < t_n = t_final. Uses round(t_final/tau)
/// equal steps when that lands on t_final; otherwise a final truncated step.
std::vector<double> step_times(double tau, double t_final);

StateField initial_state(const RunConfig& config);

/// Advances one step of config.scheme from state.t to t_next.
StateField advance(const StateField& state, const RunConfig& config, double t_next, StepWorkspace* workspace = nullptr);

/// Called after each completed step with the step index (1-based).
using StepObserver = std::function<void(int, const StateField&)>;

/// Runs from the initial condition to t_final.
StateField simulate(const RunConfig& config, const StepObserver& observer = {});

}  // namespace fastrd
