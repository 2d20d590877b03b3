#include "fastrd/semi_implicit.hpp"

namespace fastrd {

Field step_p(const StateField& state, const ModelParams& params, double tau) {
  const double r = tau / params.epsilon;
  return (state.p + r * state.u) / (1.0 + r * (state.u + state.v));
}

Field step_u(const StateField& state, const Field& p_next, const ModelParams& params, double tau,
             const Grid& grid, const FieldBoundary& bc, const SolverOptions& options, StepWorkspace* workspace) {
  const double r = tau / params.epsilon;
  const double c = params.d1 * tau / (grid.h() * grid.h());
  const Field diag = 1.0 + r * (state.v + params.lambda * (1.0 - p_next));
  return solve_implicit_diffusion(grid, bc, diag, c, state.u, dirichlet_values(grid, bc, state.t + tau), options,
                                  &state.u, workspace ? &workspace->diffusion : nullptr);
}

Field step_v(const StateField& state, const Field& u_next, const Field& p_next, const ModelParams& params,
             double tau, const Grid& grid, const FieldBoundary& bc, const SolverOptions& options,
             StepWorkspace* workspace) {
  const double r = tau / params.epsilon;
  const double c = params.d2 * tau / (grid.h() * grid.h());
  const Field diag = 1.0 + r * (u_next + params.lambda * p_next);
  return solve_implicit_diffusion(grid, bc, diag, c, state.v, dirichlet_values(grid, bc, state.t + tau), options,
                                  &state.v, workspace ? &workspace->diffusion : nullptr);
}

StateField step(const StateField& state, const ModelParams& params, double tau, const Grid& grid,
                const BoundarySpec& bc, const SolverOptions& options, StepWorkspace* workspace) {
  StateField next;
  next.p = step_p(state, params, tau);
  next.u = step_u(state, next.p, params, tau, grid, bc.u, options, workspace);
  next.v = step_v(state, next.u, next.p, params, tau, grid, bc.v, options, workspace);
  next.t = state.t + tau;
  return next;
}

}  // namespace fastrd
