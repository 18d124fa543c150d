#pragma once

#include <vector>

namespace gltl {

struct Outcome {
  int target = 0;
  double prob = 0.0;

  bool operator==(const Outcome&) const = default;
};

// Sparse distribution, sorted by target with no duplicate targets.
using Distribution = std::vector<Outcome>;

double total_mass(const Distribution& d);

}  // namespace gltl
