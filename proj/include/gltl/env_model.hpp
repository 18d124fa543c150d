#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gltl/distribution.hpp"

namespace gltl {

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Grid world description. x grows rightward, y upward, origin bottom-left.
struct GridSpec {
  int width = 0;
  int height = 0;
  double slip = 0.0;
  Cell start;
  std::map<Cell, std::vector<std::string>> cells;

  bool operator==(const GridSpec&) const = default;
};

/// Labeled environment MDP. Actions are per state and keep their declared
/// order; that order is the solver's tie-break.
struct LabeledMdp {
  std::vector<std::string> state_names;
  std::vector<std::vector<std::string>> action_names;
  std::vector<std::vector<Distribution>> transitions;  // [state][action]
  std::vector<std::vector<std::string>> labels;        // sorted per state
  int initial = 0;
  std::optional<GridSpec> grid;

  std::size_t num_states() const { return state_names.size(); }
  int state_index(const std::string& name) const;  // -1 if absent

  bool operator==(const LabeledMdp&) const = default;
};

/// Throws ValidationError on bad mass, dangling targets, empty action sets.
void validate(const LabeledMdp& env);

enum class Direction { kNorth, kSouth, kEast, kWest };
inline constexpr Direction kDirections[] = {Direction::kNorth, Direction::kSouth,
                                            Direction::kEast, Direction::kWest};

int grid_state(const GridSpec& g, Cell c);
Cell grid_cell(const GridSpec& g, int state);
Cell step(const GridSpec& g, Cell c, Direction d);  // stays put at walls

LabeledMdp grid_to_mdp(const GridSpec& g);

LabeledMdp figure1_env(double p);
LabeledMdp figure2_env(double p1, double p2);

/// Builds a builtin by name ("figure1", "figure2") with key=value overrides.
LabeledMdp builtin_env(const std::string& name,
                       const std::vector<std::pair<std::string, double>>& params);

LabeledMdp env_from_json_text(const std::string& text);
LabeledMdp load_env(const std::string& path);

}  // namespace gltl
