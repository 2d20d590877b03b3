#pragma once

#include "fastrd/linalg.hpp"
#include "fastrd/model.hpp"

namespace fastrd {

struct SolverOptions {
  double cg_tol = 1e-11;
  /// 0 selects 10 x (number of unknowns).
  int cg_max_iter = 0;

  bool operator==(const SolverOptions&) const = default;
};

/// Scratch reused across implicit solves; contents carry no meaning
/// between calls.
struct DiffusionWorkspace {
  TridiagonalSystem<double> tri;
  ArrayX<double> x;
  ArrayX<double> scratch;
};

/// A node is Dirichlet when it lies on any Dirichlet face. At a corner
/// shared by two Dirichlet faces the x face supplies the value.
bool is_dirichlet_node(const Grid& grid, const FieldBoundary& bc, int i, int j = 0);

/// Dirichlet data at time t on Dirichlet nodes, NaN elsewhere.
Field dirichlet_values(const Grid& grid, const FieldBoundary& bc, double t);

/// Five-point (three-point in 1D) Laplacian. Neumann faces reflect the
/// first interior neighbour; Dirichlet nodes get 0.
Field laplacian(const Grid& grid, const FieldBoundary& bc, const Field& x);

/// (diag - coupling h^2 Lap_h) x on non-Dirichlet nodes, x on Dirichlet nodes.
Field apply_implicit_operator(const Grid& grid, const FieldBoundary& bc, const Field& diag, double coupling,
                              const Field& x);

/// Solves  diag_k x_k - coupling h^2 (Lap_h x)_k = rhs_k  on non-Dirichlet
/// nodes with x = pinned on Dirichlet nodes. `diag` is the reaction part
/// (1 + ...), `coupling` is d tau / h^2. 1D uses Thomas elimination, 2D
/// Jacobi-preconditioned CG started from `guess` when given.
Field solve_implicit_diffusion(const Grid& grid, const FieldBoundary& bc, const Field& diag, double coupling,
                               const Field& rhs, const Field& pinned, const SolverOptions& options = {},
                               const Field* guess = nullptr, DiffusionWorkspace* workspace = nullptr);

}  // namespace fastrd
