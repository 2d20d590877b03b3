#pragma once

#include "fastrd/run.hpp"

namespace fastrd {

/// Power-of-two refinement used to build self-references for convergence
/// studies.
struct Refinement {
  enum class Axis { Time, Space };
  Axis axis = Axis::Time;
  int levels = 0;
};

/// Runs `config` with tau / 2^levels (Time) or cells * 2^levels (Space) and
/// returns the state at t_final sampled on the nodes of config.grid. Spatial
/// refinement nests the coarse nodes, so sampling is exact index striding.
StateField make_reference(const RunConfig& config, Refinement refinement);

/// Restricts a field on a grid refined by 2^levels to the coarse nodes.
Field restrict_to_coarse(const Field& fine, const Grid& coarse, int levels);

}  // namespace fastrd
