#include "fastrd/fully_implicit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fastrd {

namespace {

double relative_change(const Field& next, const Field& prev) {
  const double diff = (next - prev).abs().maxCoeff();
  const double scale = next.abs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

double relative_inf(const Field& res, const Field& a, const Field& b) {
  const double scale = std::max(a.abs().maxCoeff(), b.abs().maxCoeff());
  const double r = res.abs().maxCoeff();
  return scale > 0.0 ? r / scale : r;
}

}  // namespace

StateField fully_implicit_step(const StateField& state, const ModelParams& params, double tau, const Grid& grid,
                               const BoundarySpec& bc, const FixedPointConfig& cfg, const SolverOptions& options,
                               FixedPointReport* report) {
  const double r = tau / params.epsilon;
  const double h2 = grid.h() * grid.h();
  const double c_u = params.d1 * tau / h2;
  const double c_v = params.d2 * tau / h2;
  const Field pinned_u = dirichlet_values(grid, bc.u, state.t + tau);
  const Field pinned_v = dirichlet_values(grid, bc.v, state.t + tau);
  DiffusionWorkspace ws;

  StateField it = state;
  FixedPointReport rep;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    StateField next;
    next.p = (state.p + r * it.u) / (1.0 + r * (it.u + it.v));
    next.u = solve_implicit_diffusion(grid, bc.u, 1.0 + r * (it.v + params.lambda * (1.0 - next.p)), c_u, state.u,
                                      pinned_u, options, &it.u, &ws);
    next.v = solve_implicit_diffusion(grid, bc.v, 1.0 + r * (next.u + params.lambda * next.p), c_v, state.v,
                                      pinned_v, options, &it.v, &ws);
    next.t = state.t + tau;

    rep.sweeps = sweep;
    rep.change = std::max({relative_change(next.u, it.u), relative_change(next.v, it.v),
                           relative_change(next.p, it.p)});
    it = std::move(next);
    if (rep.change <= cfg.tol) {
      rep.residual = backward_euler_residual(state, it, params, tau, grid, bc);
      if (report) *report = rep;
      return it;
    }
  }
  rep.residual = backward_euler_residual(state, it, params, tau, grid, bc);
  if (report) *report = rep;
  throw FixedPointError("fully implicit sweeps did not converge after " + std::to_string(rep.sweeps) +
                            " sweeps (change " + std::to_string(rep.change) + ", residual " +
                            std::to_string(rep.residual) + ")",
                        rep);
}

double backward_euler_residual(const StateField& prev, const StateField& next, const ModelParams& params,
                               double tau, const Grid& grid, const BoundarySpec& bc) {
  const double r = tau / params.epsilon;
  const double h2 = grid.h() * grid.h();
  const Field diag_u = 1.0 + r * (next.v + params.lambda * (1.0 - next.p));
  const Field diag_v = 1.0 + r * (next.u + params.lambda * next.p);

  auto block = [&](const FieldBoundary& b, const Field& diag, double c, const Field& x_new, const Field& x_old) {
    Field res = apply_implicit_operator(grid, b, diag, c, x_new) - x_old;
    const Field pinned = dirichlet_values(grid, b, next.t);
    for (Eigen::Index i = 0; i < res.size(); ++i)
      if (!std::isnan(pinned(i))) res(i) = x_new(i) - pinned(i);
    return res;
  };

  const Field res_u = block(bc.u, diag_u, params.d1 * tau / h2, next.u, prev.u);
  const Field res_v = block(bc.v, diag_v, params.d2 * tau / h2, next.v, prev.v);
  const Field res_p = next.p - prev.p - r * ((1.0 - next.p) * next.u - next.v * next.p);
  return std::max({relative_inf(res_u, prev.u, next.u), relative_inf(res_v, prev.v, next.v),
                   relative_inf(res_p, prev.p, next.p)});
}

Field residual_diagnostic(const StateField& n, const StateField& n1, const ModelParams& params,
                          [[maybe_unused]] double tau) {
  const double inv_eps = 1.0 / params.epsilon;
  const double lam = params.lambda;
  return -inv_eps * n1.u * (n.v + lam * (1.0 - n1.p)) + inv_eps * n1.v * (n1.u + lam * n1.p) +
         lam * inv_eps * ((1.0 - n1.p) * n.u - n.v * n1.p);
}

}  // namespace fastrd
