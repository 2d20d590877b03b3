#include "fastrd/implicit_diffusion.hpp"

#include <cmath>
#include <limits>

namespace fastrd {

namespace {

struct UnknownRange {
  int lo;
  int hi;  // inclusive
};

UnknownRange range(const FieldBoundary& bc, Face low, Face high, int last) {
  return {bc[low].is_dirichlet() ? 1 : 0, bc[high].is_dirichlet() ? last - 1 : last};
}

}  // namespace

bool is_dirichlet_node(const Grid& grid, const FieldBoundary& bc, int i, int j) {
  const int last = grid.cells();
  if ((i == 0 && bc[Face::XLow].is_dirichlet()) || (i == last && bc[Face::XHigh].is_dirichlet())) return true;
  if (grid.dim() == 1) return false;
  return (j == 0 && bc[Face::YLow].is_dirichlet()) || (j == last && bc[Face::YHigh].is_dirichlet());
}

Field dirichlet_values(const Grid& grid, const FieldBoundary& bc, double t) {
  Field out = Field::Constant(grid.size(), std::numeric_limits<double>::quiet_NaN());
  const int last = grid.cells();
  if (grid.dim() == 1) {
    if (bc[Face::XLow].is_dirichlet()) out(0) = bc[Face::XLow].data.at(t, 0.0);
    if (bc[Face::XHigh].is_dirichlet()) out(last) = bc[Face::XHigh].data.at(t, 0.0);
    return out;
  }
  for (int k = 0; k <= last; ++k) {
    const double s = grid.coord(k);
    if (bc[Face::YLow].is_dirichlet()) out(grid.index(k, 0)) = bc[Face::YLow].data.at(t, s);
    if (bc[Face::YHigh].is_dirichlet()) out(grid.index(k, last)) = bc[Face::YHigh].data.at(t, s);
  }
  for (int k = 0; k <= last; ++k) {
    const double s = grid.coord(k);
    if (bc[Face::XLow].is_dirichlet()) out(grid.index(0, k)) = bc[Face::XLow].data.at(t, s);
    if (bc[Face::XHigh].is_dirichlet()) out(grid.index(last, k)) = bc[Face::XHigh].data.at(t, s);
  }
  return out;
}

Field laplacian(const Grid& grid, const FieldBoundary& bc, const Field& x) {
  const int last = grid.cells();
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  Field out = Field::Zero(grid.size());

  // Neighbour along one axis, reflecting across Neumann faces.
  auto lo = [&](int k) { return k > 0 ? k - 1 : 1; };
  auto hi = [&](int k) { return k < last ? k + 1 : last - 1; };

  if (grid.dim() == 1) {
    for (int i = 0; i <= last; ++i) {
      if (is_dirichlet_node(grid, bc, i)) continue;
      out(i) = (x(lo(i)) - 2.0 * x(i) + x(hi(i))) * inv_h2;
    }
    return out;
  }
  for (int j = 0; j <= last; ++j) {
    for (int i = 0; i <= last; ++i) {
      if (is_dirichlet_node(grid, bc, i, j)) continue;
      const auto k = grid.index(i, j);
      out(k) = (x(grid.index(lo(i), j)) + x(grid.index(hi(i), j)) + x(grid.index(i, lo(j))) +
                x(grid.index(i, hi(j))) - 4.0 * x(k)) *
               inv_h2;
    }
  }
  return out;
}

Field apply_implicit_operator(const Grid& grid, const FieldBoundary& bc, const Field& diag, double coupling,
                              const Field& x) {
  Field out = diag * x - coupling * grid.h() * grid.h() * laplacian(grid, bc, x);
  const int last = grid.cells();
  const int ny = grid.dim() == 1 ? 0 : last;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= last; ++i)
      if (is_dirichlet_node(grid, bc, i, j)) out(grid.index(i, j)) = x(grid.index(i, j));
  return out;
}

namespace {

Field solve_1d(const Grid& grid, const FieldBoundary& bc, const Field& diag, double c, const Field& rhs,
               const Field& pinned, DiffusionWorkspace& ws) {
  const int last = grid.cells();
  const auto [lo, hi] = range(bc, Face::XLow, Face::XHigh, last);
  const Eigen::Index n = hi - lo + 1;

  auto& sys = ws.tri;
  sys.resize(n);
  for (int i = lo; i <= hi; ++i) {
    const Eigen::Index r = i - lo;
    sys.diag(r) = diag(i) + 2.0 * c;
    sys.sub(r) = -c;
    sys.super(r) = -c;
    sys.rhs(r) = rhs(i);
  }
  if (lo == 1) sys.rhs(0) += c * pinned(0);
  else sys.super(0) = -2.0 * c;
  if (hi == last - 1) sys.rhs(n - 1) += c * pinned(last);
  else sys.sub(n - 1) = -2.0 * c;

  solve_tridiagonal(sys, ws.x, ws.scratch);

  Field out(grid.size());
  out.segment(lo, n) = ws.x;
  if (lo == 1) out(0) = pinned(0);
  if (hi == last - 1) out(last) = pinned(last);
  return out;
}

Field solve_2d(const Grid& grid, const FieldBoundary& bc, const Field& diag, double c, const Field& rhs,
               const Field& pinned, const SolverOptions& options, const Field* guess) {
  const int last = grid.cells();
  const auto xr = range(bc, Face::XLow, Face::XHigh, last);
  const auto yr = range(bc, Face::YLow, Face::YHigh, last);

  FivePointSystem<double> sys;
  sys.nx = xr.hi - xr.lo + 1;
  sys.ny = yr.hi - yr.lo + 1;
  sys.coupling = c;
  sys.mirrored = {xr.lo == 0, xr.hi == last, yr.lo == 0, yr.hi == last};
  const Eigen::Index n = sys.size();
  sys.diag.resize(n);
  sys.rhs.resize(n);
  sys.boundary = ArrayX<double>::Zero(n);
  ArrayX<double> x0;
  if (guess) x0.resize(n);

  for (int j = yr.lo; j <= yr.hi; ++j) {
    for (int i = xr.lo; i <= xr.hi; ++i) {
      const Eigen::Index k = (i - xr.lo) + sys.nx * (j - yr.lo);
      const auto g = grid.index(i, j);
      sys.diag(k) = diag(g) + 4.0 * c;
      sys.rhs(k) = rhs(g);
      if (guess) x0(k) = (*guess)(g);
      double b = 0.0;
      if (i == xr.lo && xr.lo == 1) b += pinned(grid.index(0, j));
      if (i == xr.hi && xr.hi == last - 1) b += pinned(grid.index(last, j));
      if (j == yr.lo && yr.lo == 1) b += pinned(grid.index(i, 0));
      if (j == yr.hi && yr.hi == last - 1) b += pinned(grid.index(i, last));
      sys.boundary(k) = c * b;
    }
  }

  const ArrayX<double> x =
      solve_fivepoint<double>(sys, options.cg_tol, options.cg_max_iter, guess ? &x0 : nullptr);

  Field out = pinned;
  for (int j = yr.lo; j <= yr.hi; ++j)
    for (int i = xr.lo; i <= xr.hi; ++i) out(grid.index(i, j)) = x((i - xr.lo) + sys.nx * (j - yr.lo));
  return out;
}

}  // namespace

Field solve_implicit_diffusion(const Grid& grid, const FieldBoundary& bc, const Field& diag, double coupling,
                               const Field& rhs, const Field& pinned, const SolverOptions& options,
                               const Field* guess, DiffusionWorkspace* workspace) {
  if (coupling == 0.0) {
    // Decoupled rows: pinned nodes keep their data, the rest divide through.
    Field x = rhs / diag;
    for (Eigen::Index k = 0; k < x.size(); ++k)
      if (!std::isnan(pinned(k))) x(k) = pinned(k);
    return x;
  }
  if (grid.dim() == 1) {
    DiffusionWorkspace local;
    return solve_1d(grid, bc, diag, coupling, rhs, pinned, workspace ? *workspace : local);
  }
  return solve_2d(grid, bc, diag, coupling, rhs, pinned, options, guess);
}

}  // namespace fastrd
