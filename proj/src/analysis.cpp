#include "fastrd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastrd {

ErrorTriple error_norms(const Field& numeric, const Field& reference, double h, int dim) {
  if (numeric.size() != reference.size()) throw std::invalid_argument("error_norms: shape mismatch");
  const Field diff = (numeric - reference).abs();
  const double weight = std::pow(h, dim);
  ErrorTriple e;
  e.e_inf = diff.size() ? diff.maxCoeff() : 0.0;
  e.e_1 = weight * diff.sum();
  e.e_2 = std::sqrt(weight * diff.square().sum());
  return e;
}

std::vector<double> observed_order(const std::vector<std::pair<double, double>>& errors) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const auto [s0, e0] = errors[i];
    const auto [s1, e1] = errors[i + 1];
    if (e0 == 0.0 || e1 == 0.0) throw std::domain_error("observed_order: zero error entry");
    out.push_back(std::log(e0 / e1) / std::log(s0 / s1));
  }
  return out;
}

double fitted_slope(const std::vector<std::pair<double, double>>& errors) {
  if (errors.size() < 2) throw std::invalid_argument("fitted_slope needs two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [s, e] : errors) {
    if (!(e > 0.0) || !(s > 0.0)) throw std::domain_error("fitted_slope: non-positive entry");
    const double x = std::log(s);
    const double y = std::log(e);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double n = static_cast<double>(errors.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double interior_l2_norm(const Field& x, const Grid& grid) {
  const int last = grid.cells();
  double sum = 0.0;
  if (grid.dim() == 1) {
    for (int i = 1; i < last; ++i) sum += x(i) * x(i);
  } else {
    for (int j = 1; j < last; ++j)
      for (int i = 1; i < last; ++i) sum += x(grid.index(i, j)) * x(grid.index(i, j));
  }
  return std::sqrt(std::pow(grid.h(), grid.dim()) * sum);
}

double bound_violation(const StateField& s, double c_u, double c_v) {
  const double below = std::max({-s.u.minCoeff(), -s.v.minCoeff(), -s.p.minCoeff(), 0.0});
  const double above = std::max({s.u.maxCoeff() - c_u, s.v.maxCoeff() - c_v, s.p.maxCoeff() - 1.0, 0.0});
  return std::max(below, above);
}

std::array<double, 3> growth_factors(const GrowthFactorQuery& q) {
  // 1 - cos(phi) = 2 sin^2(phi/2) keeps small phases from cancelling to 0.
  const double half = std::sin(0.5 * q.phi);
  const double k1 = 4.0 * q.d1 * q.r * half * half;
  const double k2 = 4.0 * q.d2 * q.r * half * half;
  const double s = q.limit.value;
  switch (q.limit.kind) {
    case LimitState::Kind::S1:  // (0, v*, 0)
      return {1.0 / (1.0 + q.r_eps * (s + q.lambda) + k1), 1.0 / (1.0 + k2), 1.0 / (1.0 + q.r_eps * s)};
    case LimitState::Kind::S2:  // (u*, 0, 1)
      return {1.0 / (1.0 + k1), 1.0 / (1.0 + k2 + q.r_eps * (s + q.lambda)), 1.0 / (1.0 + q.r_eps * s)};
    case LimitState::Kind::S3:  // (0, 0, p1)
      return {1.0 / (1.0 + q.r_eps * q.lambda * (1.0 - s) + k1), 1.0 / (1.0 + k2 + q.r_eps * q.lambda * s), 1.0};
  }
  return {1.0, 1.0, 1.0};
}

namespace {

void crossings(const Field& w, Eigen::Index offset, Eigen::Index stride, int n, const Grid& grid, double level,
               std::vector<double>& out) {
  for (int i = 0; i + 1 < n; ++i) {
    const double a = w(offset + stride * i) - level;
    const double b = w(offset + stride * (i + 1)) - level;
    if (a == 0.0) {
      if (i == 0 || out.empty() || out.back() != grid.coord(i)) out.push_back(grid.coord(i));
      continue;
    }
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      if (b == 0.0) continue;  // picked up as a == 0 on the next pair
      out.push_back(grid.coord(i) + grid.h() * a / (a - b));
    }
  }
  const double tail = w(offset + stride * (n - 1)) - level;
  if (tail == 0.0 && (out.empty() || out.back() != grid.coord(n - 1))) out.push_back(grid.coord(n - 1));
}

}  // namespace

std::vector<double> interface_position(const Field& w, const Grid& grid, const ModelParams& params) {
  if (grid.dim() != 1) throw std::invalid_argument("interface_position expects a 1D grid");
  std::vector<double> out;
  crossings(w, 0, 1, grid.nodes_per_axis(), grid, 0.5 * params.lambda, out);
  return out;
}

std::vector<std::vector<double>> interface_position_rows(const Field& w, const Grid& grid,
                                                         const ModelParams& params) {
  if (grid.dim() != 2) return {interface_position(w, grid, params)};
  const int n = grid.nodes_per_axis();
  std::vector<std::vector<double>> rows(n);
  for (int j = 0; j < n; ++j) crossings(w, grid.index(0, j), 1, n, grid, 0.5 * params.lambda, rows[j]);
  return rows;
}

double interface_width(const Field& w, const Grid& grid, const ModelParams& params) {
  const double lo = 0.1 * params.lambda;
  const double hi = 0.9 * params.lambda;
  const int n = grid.nodes_per_axis();
  int first = -1;
  int last = -1;
  for (int i = 0; i < n; ++i) {
    if (w(i) >= lo && w(i) <= hi) {
      if (first < 0) first = i;
      last = i;
    }
  }
  return first < 0 ? 0.0 : grid.coord(last) - grid.coord(first);
}

}  // namespace fastrd
