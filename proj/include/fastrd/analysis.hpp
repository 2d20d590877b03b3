#pragma once

#include "fastrd/model.hpp"

#include <array>
#include <utility>
#include <vector>

namespace fastrd {

// ---------------------------------------------------------------------------
// Error norms and convergence orders

struct ErrorTriple {
  double e_inf = 0.0;
  double e_1 = 0.0;
  double e_2 = 0.0;
};

/// e_inf = max |diff|, e_1 = h^dim sum |diff|, e_2 = (h^dim sum diff^2)^(1/2),
/// summed over every node.
ErrorTriple error_norms(const Field& numeric, const Field& reference, double h, int dim);

/// order_i = log(err_i / err_{i+1}) / log(step_i / step_{i+1}) for each
/// consecutive pair; the result has one entry fewer than the input.
/// Throws std::domain_error on a zero error.
std::vector<double> observed_order(const std::vector<std::pair<double, double>>& errors);

/// Least-squares slope of log(err) against log(step).
double fitted_slope(const std::vector<std::pair<double, double>>& errors);

/// (h^dim sum over nodes off every boundary face of x^2)^(1/2).
double interior_l2_norm(const Field& x, const Grid& grid);

/// Largest amount by which any node leaves 0 <= p <= 1, 0 <= u <= c_u,
/// 0 <= v <= c_v; 0 when all bounds hold.
double bound_violation(const StateField& state, double c_u, double c_v);

// ---------------------------------------------------------------------------
// Growth factors of the linearised semi-implicit scheme near limit states

struct LimitState {
  enum class Kind { S1, S2, S3 };
  Kind kind = Kind::S3;
  /// v* for S1, u* for S2, p1 for S3.
  double value = 0.0;

  static LimitState s1(double v_star) { return {Kind::S1, v_star}; }
  static LimitState s2(double u_star) { return {Kind::S2, u_star}; }
  static LimitState s3(double p1) { return {Kind::S3, p1}; }
};

struct GrowthFactorQuery {
  double r = 0.0;      // tau / h^2
  double r_eps = 0.0;  // tau / eps
  double phi = 0.0;    // wavenumber times h
  double lambda = 1.0;
  double d1 = 1.0;
  double d2 = 1.0;
  LimitState limit;
};

/// The three roots of det M*_k = 0 for the query's limit state. Each branch
/// has the form [1 + reaction + 2 d r (1 - cos phi)] lambda_k = 1.
std::array<double, 3> growth_factors(const GrowthFactorQuery& q);

// ---------------------------------------------------------------------------
// Interface diagnostics

/// Abscissae where a 1D profile crosses lambda/2, by linear interpolation
/// between bracketing nodes, in increasing x. Empty when never crossed.
std::vector<double> interface_position(const Field& w, const Grid& grid, const ModelParams& params);

/// Crossings along x1 for every row x2 = const of a 2D field.
std::vector<std::vector<double>> interface_position_rows(const Field& w, const Grid& grid, const ModelParams& params);

/// Length of the smallest interval holding every node with
/// 0.1 lambda <= w <= 0.9 lambda; 0 when there is none.
double interface_width(const Field& w, const Grid& grid, const ModelParams& params);

}  // namespace fastrd
