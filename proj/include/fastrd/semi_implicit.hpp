#pragma once

#include "fastrd/implicit_diffusion.hpp"
#include "fastrd/model.hpp"

namespace fastrd {

/// Scratch for repeated semi-implicit steps on one grid.
struct StepWorkspace {
  DiffusionWorkspace diffusion;
};

/// p^{n+1} = (p + (tau/eps) u) / (1 + (tau/eps)(u + v)) at every node.
Field step_p(const StateField& state, const ModelParams& params, double tau);

/// [1 + (tau/eps)(v^n + lambda (1 - p^{n+1})) - d1 tau Lap_h] u^{n+1} = u^n,
/// Dirichlet data taken at t + tau.
Field step_u(const StateField& state, const Field& p_next, const ModelParams& params, double tau,
             const Grid& grid, const FieldBoundary& bc, const SolverOptions& options = {},
             StepWorkspace* workspace = nullptr);

/// [1 + (tau/eps)(u^{n+1} + lambda p^{n+1}) - d2 tau Lap_h] v^{n+1} = v^n.
Field step_v(const StateField& state, const Field& u_next, const Field& p_next, const ModelParams& params,
             double tau, const Grid& grid, const FieldBoundary& bc, const SolverOptions& options = {},
             StepWorkspace* workspace = nullptr);

/// One first-order step: p, then u with the new p, then v with the new u and p.
StateField step(const StateField& state, const ModelParams& params, double tau, const Grid& grid,
                const BoundarySpec& bc, const SolverOptions& options = {}, StepWorkspace* workspace = nullptr);

}  // namespace fastrd
