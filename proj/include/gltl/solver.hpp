#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gltl/env_model.hpp"
#include "gltl/formula.hpp"
#include "gltl/product.hpp"

namespace gltl {

struct ValueFunction {
  std::vector<double> values;  // indexed by product state
  bool converged = true;
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct Policy {
  std::vector<int> actions;  // -1 at sinks
};

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kDefaultMaxIterations = 1'000'000;

/// Undiscounted maximum-reachability value iteration with the accept sink
/// pinned at 1 and the reject sink at 0.
ValueFunction value_iterate(const ProductMdp& p, double tol = kDefaultTolerance,
                            std::size_t max_iter = kDefaultMaxIterations);

/// Greedy policy; ties go to the lowest declared action index.
Policy extract_policy(const ProductMdp& p, const ValueFunction& v);

/// Acceptance probabilities of the chain induced by `pi`, solved directly as
/// (I - Q) h = b by Gaussian elimination with partial pivoting. Throws
/// SingularSystem when the chain is not absorbing.
ValueFunction exact_chain_solve(const ProductMdp& p, const Policy& pi);

/// Expected value under the product's initial distribution.
double initial_value(const ProductMdp& p, const std::vector<double>& values);

inline constexpr std::size_t kPolishLimit = 3000;

struct Solution {
  ValueFunction values;
  Policy policy;
  bool polished = false;  // values replaced by the exact evaluation of `policy`
};

/// Value iteration followed by greedy extraction. When the product has at
/// most `polish_limit` live states the greedy policy is then evaluated
/// exactly, which removes the geometric tail VI leaves behind at its
/// stopping tolerance. Convergence fields always describe the VI run.
Solution solve(const ProductMdp& p, double tol = kDefaultTolerance,
               std::size_t max_iter = kDefaultMaxIterations,
               std::size_t polish_limit = kPolishLimit);

// ---------------------------------------------------------------------------
// Discounted reward baseline

/// Environment with a reward paid on entering each state. Terminal states
/// end the episode: they are worth nothing after being entered.
struct RewardedEnv {
  LabeledMdp env;
  std::vector<double> entry_reward;
  std::vector<bool> terminal;
};

struct QTable {
  std::vector<std::vector<double>> q;  // [state][action]; empty for terminals
  std::vector<double> v;
  double residual = 0.0;
  std::size_t iterations = 0;
};

QTable solve_discounted(const RewardedEnv& m, double gamma, double tol = 1e-12,
                        std::size_t max_iter = kDefaultMaxIterations);

/// figure1 with +goal_reward on entering g (terminal) and -r on entering b1 or b2.
RewardedEnv figure1_rewarded(double p, double r, double goal_reward = 1.0);

struct RewardBaseline {
  double q_a1 = 0.0;
  double q_a2 = 0.0;
  std::string preferred;  // "a1" or "a2"; ties go to a1
};

RewardBaseline reward_baseline(double p, double r, double gamma);

// ---------------------------------------------------------------------------
// Monte Carlo

enum class EpisodeOutcome { kAccepted, kRejected, kCensored };

struct TrajectoryStep {
  int env_state = 0;
  int spec_state = 0;
  int action = -1;  // -1 on the final step
};

struct Episode {
  EpisodeOutcome outcome = EpisodeOutcome::kCensored;
  std::size_t steps = 0;
  std::vector<TrajectoryStep> trajectory;  // filled only when recording
};

struct SimulationOptions {
  std::size_t episodes = 1;
  std::uint64_t seed = 0;
  std::size_t max_steps = 100'000;
  unsigned workers = 1;
  std::size_t examples = 10;
};

struct SimulationReport {
  std::size_t episodes = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t censored = 0;
  double rate = 0.0;
  double half_width = 0.0;  // 3 sigma, from the empirical rate
  std::vector<Episode> examples;
};

/// One rollout sampling the environment then the spec automaton each step.
/// Episode `index` draws from its own stream derived from (seed, index).
Episode simulate_episode(const ProductMdp& p, const Policy& pi, std::uint64_t seed,
                         std::uint64_t index, std::size_t max_steps, bool record);

/// Aggregate is independent of the worker count.
SimulationReport simulate(const ProductMdp& p, const Policy& pi, const SimulationOptions& opt);

// ---------------------------------------------------------------------------
// Sensitivity

struct SensitivityRow {
  double param = 0.0;
  double value = 0.0;
  double derivative = 0.0;  // centered finite difference
};

using EnvBuilder = std::function<LabeledMdp(double)>;

/// Optimal satisfaction probability of `f` on builder(param), computed by the
/// linear-solve oracle on the greedy policy.
double optimal_satisfaction(const LabeledMdp& env, const SpecMdp& spec);

std::vector<SensitivityRow> sensitivity_scan(const EnvBuilder& builder, const Formula& f,
                                             std::span<const double> params, double step = 1e-5);

}  // namespace gltl
