// Shared helpers for the unit tests and the acceptance binary: seeded random
// instances and oracles that do not reuse the solver's own code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gltl/env_model.hpp"
#include "gltl/formula.hpp"
#include "gltl/product.hpp"
#include "gltl/solver.hpp"
#include "gltl/spec_mdp.hpp"

namespace gltl::testing {

inline const std::vector<std::string> kAtoms = {"a", "b", "c"};

inline Formula random_formula(std::mt19937_64& rng, int depth, const std::vector<double>& mus) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto leaf = [&] {
    const std::size_t k = pick(kAtoms.size() + 1);
    if (k < kAtoms.size()) return Formula::atom(kAtoms[k]);
    return pick(2) ? Formula::truth() : Formula::falsity();
  };
  if (depth <= 0) return leaf();
  const double mu = mus[pick(mus.size())];
  switch (pick(7)) {
    case 0: return leaf();
    case 1: return Formula::negation(random_formula(rng, depth - 1, mus));
    case 2: return Formula::conjunction(random_formula(rng, depth - 1, mus), random_formula(rng, depth - 1, mus));
    case 3: return Formula::disjunction(random_formula(rng, depth - 1, mus), random_formula(rng, depth - 1, mus));
    case 4: return Formula::until(mu, random_formula(rng, depth - 1, mus), random_formula(rng, depth - 1, mus));
    case 5: return Formula::eventually(mu, random_formula(rng, depth - 1, mus));
    default: return Formula::always(mu, random_formula(rng, depth - 1, mus));
  }
}

inline Distribution random_distribution(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> target(0, n - 1);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  const int support = std::uniform_int_distribution<int>(1, std::min(3, n))(rng);
  std::vector<int> targets;
  while (static_cast<int>(targets.size()) < support) {
    const int t = target(rng);
    if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
  }
  std::sort(targets.begin(), targets.end());
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) total += w.emplace_back(weight(rng));
  Distribution d;
  double used = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double p = i + 1 == targets.size() ? 1.0 - used : w[i] / total;
    used += p;
    d.push_back({targets[i], p});
  }
  return d;
}

inline LabeledMdp random_env(std::mt19937_64& rng, int max_states = 6) {
  const int n = std::uniform_int_distribution<int>(2, max_states)(rng);
  LabeledMdp env;
  for (int s = 0; s < n; ++s) {
    env.state_names.push_back("s" + std::to_string(s));
    const int actions = std::uniform_int_distribution<int>(1, 3)(rng);
    env.action_names.emplace_back();
    env.transitions.emplace_back();
    for (int a = 0; a < actions; ++a) {
      env.action_names.back().push_back("u" + std::to_string(a));
      env.transitions.back().push_back(random_distribution(rng, n));
    }
    std::vector<std::string> labels;
    for (const auto& atom : kAtoms) {
      if (std::bernoulli_distribution(0.4)(rng)) labels.push_back(atom);
    }
    env.labels.push_back(labels);
  }
  validate(env);
  return env;
}

// Random product with at most max_states states (sinks included).
inline ProductMdp random_product(std::mt19937_64& rng, std::size_t max_states = 50) {
  while (true) {
    const Formula f = random_formula(rng, std::uniform_int_distribution<int>(1, 3)(rng), {0.5, 0.9});
    ProductMdp p = compose(random_env(rng), compile(f));
    if (p.num_states() <= max_states) return p;
  }
}

// Value iteration in the reward formulation: +1 on the transition entering
// the accept sink, sinks worth 0 afterwards, nothing pinned.
inline std::vector<double> reward_accumulation_values(const ProductMdp& p, double tol = 1e-13) {
  std::vector<double> v(p.num_states(), 0.0);
  for (int iter = 0; iter < 1'000'000; ++iter) {
    std::vector<double> next(v.size(), 0.0);
    double residual = 0.0;
    for (int x = 0; x < static_cast<int>(p.num_states()); ++x) {
      double best = -1.0;
      for (int a = 0; a < static_cast<int>(p.num_actions(x)); ++a) {
        double q = 0.0;
        for (const auto& o : p.next(x, a)) {
          const bool enters_accept = o.target == ProductMdp::kAcceptSink && x != ProductMdp::kAcceptSink;
          q += o.prob * ((enters_accept ? 1.0 : 0.0) + v[o.target]);
        }
        best = std::max(best, q);
      }
      next[x] = best;
      residual = std::max(residual, std::abs(best - v[x]));
    }
    v.swap(next);
    if (residual < tol) break;
  }
  // Expressed as "value of being in x", so the accept sink reads 1.
  v[ProductMdp::kAcceptSink] = 1.0;
  return v;
}

// Maximum over all deterministic stationary policies, each evaluated by the
// exact solver. Only for products with a small policy space.
inline double brute_force_optimum(const ProductMdp& p, std::size_t max_policies = 20000) {
  std::size_t count = 1;
  for (int x = 2; x < static_cast<int>(p.num_states()); ++x) {
    count *= p.num_actions(x);
    if (count > max_policies) return std::nan("");
  }
  Policy pi;
  pi.actions.assign(p.num_states(), 0);
  pi.actions[0] = pi.actions[1] = -1;
  double best = -1.0;
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t code = k;
    for (int x = 2; x < static_cast<int>(p.num_states()); ++x) {
      pi.actions[x] = static_cast<int>(code % p.num_actions(x));
      code /= p.num_actions(x);
    }
    best = std::max(best, initial_value(p, exact_chain_solve(p, pi).values));
  }
  return best;
}

inline double three_sigma(double v, std::size_t n) {
  return 3.0 * std::sqrt(v * (1.0 - v) / static_cast<double>(n)) + 1e-9;
}

inline std::string grid_task_formula() {
  return "(!blue U{0.95} red) & F{0.95}(red & F{0.95} green)";
}

}  // namespace gltl::testing
