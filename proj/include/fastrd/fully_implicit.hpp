#pragma once

#include "fastrd/implicit_diffusion.hpp"
#include "fastrd/model.hpp"

#include <stdexcept>

namespace fastrd {

struct FixedPointConfig {
  double tol = 1e-12;  // max relative change between sweeps
  int max_sweeps = 200;

  bool operator==(const FixedPointConfig&) const = default;
};

struct FixedPointReport {
  int sweeps = 0;
  double change = 0.0;
  double residual = 0.0;
};

class FixedPointError : public std::runtime_error {
public:
  FixedPointError(const std::string& what, FixedPointReport report)
      : std::runtime_error(what), report_(report) {}
  const FixedPointReport& report() const { return report_; }

private:
  FixedPointReport report_;
};

/// Backward Euler with every reaction argument at the new level, resolved by
/// Gauss-Seidel sweeps of the semi-implicit sub-steps (p, then u, then v)
/// with cross terms frozen from the previous sweep. The first sweep is the
/// semi-implicit step. Throws FixedPointError when max_sweeps is exhausted.
StateField fully_implicit_step(const StateField& state, const ModelParams& params, double tau, const Grid& grid,
                               const BoundarySpec& bc, const FixedPointConfig& cfg = {},
                               const SolverOptions& options = {}, FixedPointReport* report = nullptr);

/// Max over u, v, p of ||backward-Euler residual||_inf / max(||prev||_inf, ||next||_inf).
double backward_euler_residual(const StateField& prev, const StateField& next, const ModelParams& params,
                               double tau, const Grid& grid, const BoundarySpec& bc);

/// Pointwise residual of the enthalpy balance left by one semi-implicit step:
///   R = -(1/eps) u' [v + lambda (1 - p')] + (1/eps) v' (u' + lambda p')
///       + (lambda/eps) [(1 - p') u - v p']
/// with primes on the new level.
Field residual_diagnostic(const StateField& state_n, const StateField& state_n1, const ModelParams& params,
                          double tau);

}  // namespace fastrd
