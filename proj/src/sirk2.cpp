#include "fastrd/sirk2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastrd {

ButcherPair ButcherPair::second_order() {
  const double gamma = 1.0 - 1.0 / std::sqrt(2.0);
  const double c0 = 1.0 / (2.0 * gamma);
  ButcherPair t;
  t.a_hat << 0.0, 0.0, c0, 0.0;
  t.a << gamma, 0.0, 1.0 - gamma, gamma;
  t.b_hat << 1.0 - gamma, gamma;
  t.b = t.b_hat;
  t.c_hat << 0.0, c0;
  t.c << gamma, 1.0;
  t.check();
  return t;
}

void ButcherPair::check(double tol) const {
  auto fail = [](const char* what) { throw std::invalid_argument(std::string("Butcher pair: ") + what); };
  if (a_hat(0, 0) != 0.0 || a_hat(1, 1) != 0.0 || a_hat(0, 1) != 0.0) fail("A_hat must be strictly lower triangular");
  if (a(0, 1) != 0.0) fail("A must be lower triangular");
  if (std::abs(a(0, 0) - a(1, 1)) > tol || !(a(0, 0) > 0.0)) fail("A needs equal positive diagonal");
  for (int i = 0; i < 2; ++i) {
    double hat_sum = 0.0;
    double sum = 0.0;
    for (int j = 0; j < i; ++j) hat_sum += a_hat(i, j);
    for (int j = 0; j <= i; ++j) sum += a(i, j);
    if (std::abs(c_hat(i) - hat_sum) > tol) fail("c_hat must equal row sums of A_hat");
    if (std::abs(c(i) - sum) > tol) fail("c must equal row sums of A");
  }
  if (std::abs(b_hat.sum() - 1.0) > tol || std::abs(b.sum() - 1.0) > tol) fail("weights must sum to 1");
}

namespace {

struct StageRows {
  Field diag_u;
  Field diag_v;
  Field f_u;
  Field f_v;
  Field f_p;
  Field diag_p;
  double c_u;
  double c_v;
  double r;  // tau a_ii / eps
};

StageRows assemble(const StateField& Y, const StateField& Z, double a_ii, const ModelParams& params, double tau,
                   const Grid& grid, const BoundarySpec& bc) {
  const double inv_eps = 1.0 / params.epsilon;
  const double r = tau * a_ii * inv_eps;
  const double h2 = grid.h() * grid.h();
  const Field react_u = Y.v + params.lambda * (1.0 - Y.p);
  const Field react_v = Y.u + params.lambda * Y.p;
  const Field uv = Y.u + Y.v;

  StageRows rows;
  rows.r = r;
  rows.diag_u = 1.0 + r * react_u;
  rows.diag_v = 1.0 + r * react_v;
  rows.diag_p = 1.0 + r * uv;
  rows.c_u = params.d1 * tau * a_ii / h2;
  rows.c_v = params.d2 * tau * a_ii / h2;
  rows.f_u = -inv_eps * Z.u * react_u + params.d1 * laplacian(grid, bc.u, Z.u);
  rows.f_v = -inv_eps * Z.v * react_v + params.d2 * laplacian(grid, bc.v, Z.v);
  rows.f_p = inv_eps * (Z.u - uv * Z.p);
  return rows;
}

// Flux values that put Z + tau a_ii k on the Dirichlet data.
Field pinned_flux(const Grid& grid, const FieldBoundary& bc, const Field& z, double scale, double stage_time) {
  return (dirichlet_values(grid, bc, stage_time) - z) / scale;
}

}  // namespace

StageFlux stage_solve(const StateField& Y, const StateField& Z, double a_ii, double stage_time,
                      const ModelParams& params, double tau, const Grid& grid, const BoundarySpec& bc,
                      const SolverOptions& options) {
  if (!(a_ii > 0.0)) throw std::invalid_argument("stage_solve needs a_ii > 0");
  const StageRows rows = assemble(Y, Z, a_ii, params, tau, grid, bc);
  const double scale = tau * a_ii;

  StageFlux k;
  k.k_u = solve_implicit_diffusion(grid, bc.u, rows.diag_u, rows.c_u, rows.f_u,
                                   pinned_flux(grid, bc.u, Z.u, scale, stage_time), options);
  k.k_v = solve_implicit_diffusion(grid, bc.v, rows.diag_v, rows.c_v, rows.f_v,
                                   pinned_flux(grid, bc.v, Z.v, scale, stage_time), options);
  k.k_p = (rows.f_p + rows.r * k.k_u) / rows.diag_p;
  return k;
}

StageResidual stage_residual(const StateField& Y, const StateField& Z, double a_ii, double stage_time,
                             const StageFlux& k, const ModelParams& params, double tau, const Grid& grid,
                             const BoundarySpec& bc) {
  const StageRows rows = assemble(Y, Z, a_ii, params, tau, grid, bc);
  const double scale = tau * a_ii;

  // Dirichlet rows of the u/v blocks read k = pinned flux.
  auto block = [&](const FieldBoundary& b, const Field& diag, double c, const Field& f, const Field& z,
                   const Field& kk, Field& rhs_out) {
    const Field pinned = pinned_flux(grid, b, z, scale, stage_time);
    rhs_out = f;
    for (Eigen::Index i = 0; i < pinned.size(); ++i)
      if (!std::isnan(pinned(i))) rhs_out(i) = pinned(i);
    return Field(apply_implicit_operator(grid, b, diag, c, kk) - rhs_out);
  };

  Field rhs_u;
  Field rhs_v;
  const Field res_u = block(bc.u, rows.diag_u, rows.c_u, rows.f_u, Z.u, k.k_u, rhs_u);
  const Field res_v = block(bc.v, rows.diag_v, rows.c_v, rows.f_v, Z.v, k.k_v, rhs_v);
  const Field res_p = rows.diag_p * k.k_p - rows.r * k.k_u - rows.f_p;

  StageResidual out;
  out.residual_inf = std::max({res_u.abs().maxCoeff(), res_v.abs().maxCoeff(), res_p.abs().maxCoeff()});
  out.rhs_inf = std::max({rhs_u.abs().maxCoeff(), rhs_v.abs().maxCoeff(), rows.f_p.abs().maxCoeff()});
  return out;
}

StateField sirk2_step(const StateField& y, const ModelParams& params, double tau, const Grid& grid,
                      const BoundarySpec& bc, const ButcherPair& tableau, const SolverOptions& options) {
  constexpr int stages = 2;
  StageFlux k[stages];
  for (int i = 0; i < stages; ++i) {
    StateField Y = y;
    StateField Z = y;
    for (int j = 0; j < i; ++j) {
      Y.u += tau * tableau.a_hat(i, j) * k[j].k_u;
      Y.v += tau * tableau.a_hat(i, j) * k[j].k_v;
      Y.p += tau * tableau.a_hat(i, j) * k[j].k_p;
      Z.u += tau * tableau.a(i, j) * k[j].k_u;
      Z.v += tau * tableau.a(i, j) * k[j].k_v;
      Z.p += tau * tableau.a(i, j) * k[j].k_p;
    }
    k[i] = stage_solve(Y, Z, tableau.a(i, i), y.t + tableau.c(i) * tau, params, tau, grid, bc, options);
  }

  StateField next = y;
  for (int i = 0; i < stages; ++i) {
    next.u += tau * tableau.b_hat(i) * k[i].k_u;
    next.v += tau * tableau.b_hat(i) * k[i].k_v;
    next.p += tau * tableau.b_hat(i) * k[i].k_p;
  }
  next.t = y.t + tau;
  return next;
}

}  // namespace fastrd
