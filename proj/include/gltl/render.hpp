#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gltl/product.hpp"
#include "gltl/solver.hpp"

namespace gltl {

/// Rollout with slip switched off: the agent always moves in the chosen
/// direction and the spec automaton takes its most likely successor (ties go
/// to the lowest state id), so windows never expire along the way.
struct GridRollout {
  std::vector<Cell> cells;     // visited cells, starting at the start cell
  std::vector<int> spec_states;
  EpisodeOutcome outcome = EpisodeOutcome::kCensored;
  std::optional<std::size_t> first_red;  // step index into cells
};

GridRollout deterministic_rollout(const ProductMdp& p, const Policy& pi, std::size_t max_steps = 0);

struct RenderOptions {
  bool path = false;  // draw the zero-slip rollout
  bool color = false;
};

/// ASCII picture of a grid environment with the policy projected at the
/// spec's initial state. Throws InvalidArgument when the env is not a grid.
std::string render_grid(const ProductMdp& p, const Policy& pi, const RenderOptions& opt);

}  // namespace gltl
