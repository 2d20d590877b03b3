#pragma once

#include "fastrd/implicit_diffusion.hpp"
#include "fastrd/model.hpp"

namespace fastrd {

/// Double Butcher tableau of a two-stage semi-implicit Runge-Kutta method.
/// The hatted (explicit) part advances the variables entering reaction
/// coefficients; the implicit part advances the duplicated copies that
/// carry diffusion and the reacting factor.
struct ButcherPair {
  Eigen::Matrix2d a_hat;
  Eigen::Matrix2d a;
  Eigen::Vector2d b_hat;
  Eigen::Vector2d b;
  Eigen::Vector2d c_hat;
  Eigen::Vector2d c;

  /// gamma = 1 - 1/sqrt(2), c0 = 1/(2 gamma):
  ///
  ///   0  | 0   0        gamma | gamma      0
  ///   c0 | c0  0        1     | 1-gamma    gamma
  ///   ---+--------      ------+-----------------
  ///      | 1-g g              | 1-gamma    gamma
  static ButcherPair second_order();

  /// Structural checks: triangularity, equal diagonal, row-sum consistency.
  /// Throws std::invalid_argument naming the failed property.
  void check(double tol = 1e-15) const;
};

/// Stage flux k_i split by component.
struct StageFlux {
  Field k_u;
  Field k_v;
  Field k_p;
};

/// Solves M_i k_i = f_i for one stage. The u and v rows are implicit
/// reaction-diffusion solves; the p row follows pointwise from k_u.
/// Dirichlet rows pin Z_tilde + tau a_ii k to the data at `stage_time`.
StageFlux stage_solve(const StateField& Y, const StateField& Z_tilde, double a_ii, double stage_time,
                      const ModelParams& params, double tau, const Grid& grid, const BoundarySpec& bc,
                      const SolverOptions& options = {});

struct StageResidual {
  double residual_inf = 0.0;  // max |M k - f| over all rows
  double rhs_inf = 0.0;       // max |f|
};

/// Multiplies the assembled stage operator back onto `k` and compares with
/// the stage right-hand side.
StageResidual stage_residual(const StateField& Y, const StateField& Z_tilde, double a_ii, double stage_time,
                             const StageFlux& k, const ModelParams& params, double tau, const Grid& grid,
                             const BoundarySpec& bc);

/// One SIRK step: y^{n+1} = y^n + tau sum_i b_hat_i k_i.
StateField sirk2_step(const StateField& state, const ModelParams& params, double tau, const Grid& grid,
                      const BoundarySpec& bc, const ButcherPair& tableau = ButcherPair::second_order(),
                      const SolverOptions& options = {});

}  // namespace fastrd
