#include "fastrd/reference.hpp"

#include <stdexcept>

namespace fastrd {

Field restrict_to_coarse(const Field& fine, const Grid& coarse, int levels) {
  const int stride = 1 << levels;
  const int n = coarse.nodes_per_axis();
  const Eigen::Index fine_n = static_cast<Eigen::Index>(coarse.cells()) * stride + 1;
  const Eigen::Index expected = coarse.dim() == 1 ? fine_n : fine_n * fine_n;
  if (fine.size() != expected) throw std::invalid_argument("fine field does not nest the coarse grid");

  Field out(coarse.size());
  if (coarse.dim() == 1) {
    for (int i = 0; i < n; ++i) out(i) = fine(static_cast<Eigen::Index>(i) * stride);
    return out;
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out(coarse.index(i, j)) = fine(static_cast<Eigen::Index>(i) * stride + fine_n * j * stride);
  return out;
}

StateField make_reference(const RunConfig& config, Refinement refinement) {
  if (refinement.levels < 0) throw std::invalid_argument("refinement levels must be >= 0");
  RunConfig fine = config;
  if (refinement.axis == Refinement::Axis::Time) {
    fine.tau = config.tau / static_cast<double>(1LL << refinement.levels);
    return simulate(fine);
  }
  if (!std::holds_alternative<InitialPreset>(config.initial) && refinement.levels > 0) {
    throw std::invalid_argument("spatial refinement needs a preset initial condition");
  }
  const int factor = 1 << refinement.levels;
  fine.grid = Grid(config.grid.dim(), config.grid.a(), config.grid.b(), config.grid.cells() * factor);
  StateField s = simulate(fine);
  StateField out;
  out.u = restrict_to_coarse(s.u, config.grid, refinement.levels);
  out.v = restrict_to_coarse(s.v, config.grid, refinement.levels);
  out.p = restrict_to_coarse(s.p, config.grid, refinement.levels);
  out.t = s.t;
  return out;
}

}  // namespace fastrd
