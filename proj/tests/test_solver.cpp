#include <doctest.h>

#include <cmath>
#include <random>

#include "gltl/env_model.hpp"
#include "gltl/error.hpp"
#include "gltl/formula.hpp"
#include "gltl/product.hpp"
#include "gltl/solver.hpp"
#include "support.hpp"

using namespace gltl;

namespace {

ProductMdp make(const LabeledMdp& env, const std::string& formula) { return compose(env, compile(parse(formula))); }

int initial_live(const ProductMdp& p) {
  for (const auto& o : p.initial()) {
    if (!p.is_sink(o.target)) return o.target;
  }
  return -1;
}

double bellman_residual(const ProductMdp& p, const std::vector<double>& v) {
  double r = 0.0;
  for (int x = 2; x < static_cast<int>(p.num_states()); ++x) {
    double best = 0.0;
    for (int a = 0; a < static_cast<int>(p.num_actions(x)); ++a) {
      double q = 0.0;
      for (const auto& o : p.next(x, a)) q += o.prob * v[o.target];
      best = std::max(best, q);
    }
    r = std::max(r, std::abs(best - v[x]));
  }
  return r;
}

}  // namespace

TEST_CASE("figure2 mu-always value") {
  for (double p : {0.0, 0.5, 0.9, 0.95, 0.99, 1.0}) {
    const ProductMdp prod = make(figure2_env(p, p), "G{0.9} g");
    const ValueFunction v = value_iterate(prod, 1e-12);
    CHECK(v.converged);
    CHECK(initial_value(prod, v.values) == doctest::Approx(0.1 / (1.0 - 0.9 * p)).epsilon(1e-9));
  }
  const ProductMdp prod = make(figure2_env(0.95, 0.95), "G{0.9} g");
  const ValueFunction vi = value_iterate(prod);
  CHECK(std::abs(initial_value(prod, vi.values) - 0.6896551724) <= 1e-8);
}

TEST_CASE("figure2 exact solve under a fixed action") {
  const ProductMdp prod = make(figure2_env(0.8, 0.3), "G{0.9} g");
  Policy pi;
  pi.actions = {-1, -1, 0};
  CHECK(initial_value(prod, exact_chain_solve(prod, pi).values) == doctest::Approx(0.1 / (1 - 0.9 * 0.8)));
  pi.actions[2] = 1;
  CHECK(initial_value(prod, exact_chain_solve(prod, pi).values) == doctest::Approx(0.1 / (1 - 0.9 * 0.3)));
  const Policy best = extract_policy(prod, value_iterate(prod));
  CHECK(best.actions[2] == 0);
}

TEST_CASE("ties go to the first declared action") {
  const ProductMdp prod = make(figure2_env(0.9, 0.9), "G{0.9} g");
  CHECK(extract_policy(prod, value_iterate(prod)).actions[2] == 0);
}

TEST_CASE("figure1 until value and action") {
  for (double p : {0.1, 0.3}) {
    const ProductMdp prod = make(figure1_env(p), "!b U{0.95} g");
    const ValueFunction v = value_iterate(prod);
    const Policy pi = extract_policy(prod, v);
    const int x = initial_live(prod);
    CHECK(prod.action_name(x, pi.actions[x]) == "a2");
    CHECK(initial_value(prod, v.values) == doctest::Approx(0.9025 * (1 - p)).epsilon(1e-10));
    Policy a1 = pi;
    a1.actions[x] = 0;
    CHECK(initial_value(prod, exact_chain_solve(prod, a1).values) == 0.0);
  }
}

TEST_CASE("optimal action on figure1 does not depend on mu") {
  for (double mu : {0.5, 0.9, 0.99}) {
    const ProductMdp prod = make(figure1_env(0.1), "!b U{" + format_mu(mu) + "} g");
    const Policy pi = extract_policy(prod, value_iterate(prod));
    const int x = initial_live(prod);
    CHECK(prod.action_name(x, pi.actions[x]) == "a2");
  }
}

TEST_CASE("longer windows help a reachability task") {
  double previous = -1.0;
  for (double mu : {0.5, 0.7, 0.9, 0.99}) {
    const ProductMdp prod = make(figure1_env(0.1), "F{" + format_mu(mu) + "} g");
    const double v = initial_value(prod, solve(prod).values.values);
    CHECK(v >= previous);
    previous = v;
  }
}

TEST_CASE("true spec is worth one") {
  const ProductMdp prod = make(figure1_env(0.1), "true");
  CHECK(initial_value(prod, value_iterate(prod).values) == 1.0);
  const ProductMdp never = make(figure1_env(0.1), "false");
  CHECK(initial_value(never, value_iterate(never).values) == 0.0);
}

TEST_CASE("single-action environments") {
  LabeledMdp env = figure2_env(0.5, 0.5);
  env.action_names[0] = {"only"};
  env.transitions[0].resize(1);
  const ProductMdp prod = compose(env, compile(parse("G{0.5} g")));
  const Policy pi = extract_policy(prod, value_iterate(prod));
  for (int x = 2; x < static_cast<int>(prod.num_states()); ++x) CHECK(pi.actions[x] == 0);
  CHECK(pi.actions[0] == -1);
  CHECK(pi.actions[1] == -1);
}

TEST_CASE("pinned sinks agree with reward accumulation") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 40; ++i) {
    const ProductMdp p = gltl::testing::random_product(rng, 60);
    const ValueFunction v = value_iterate(p, 1e-13);
    const std::vector<double> r = gltl::testing::reward_accumulation_values(p);
    for (std::size_t x = 0; x < p.num_states(); ++x) CHECK(std::abs(v.values[x] - r[x]) <= 1e-9);
  }
}

TEST_CASE("value iteration finds the best deterministic policy") {
  std::mt19937_64 rng(22);
  int compared = 0;
  for (int i = 0; i < 60 && compared < 25; ++i) {
    const ProductMdp p = gltl::testing::random_product(rng, 14);
    const double brute = gltl::testing::brute_force_optimum(p);
    if (std::isnan(brute)) continue;
    ++compared;
    CHECK(std::abs(initial_value(p, value_iterate(p, 1e-13).values) - brute) <= 1e-9);
  }
  CHECK(compared >= 10);
}

TEST_CASE("value iteration, greedy policy and exact solve agree") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    const ProductMdp p = gltl::testing::random_product(rng, 50);
    const ValueFunction v = value_iterate(p, 1e-12);
    CHECK(v.converged);
    CHECK(v.residual < 1e-12);
    CHECK(bellman_residual(p, v.values) <= 1e-11);
    const ValueFunction exact = exact_chain_solve(p, extract_policy(p, v));
    for (std::size_t x = 0; x < p.num_states(); ++x) {
      CHECK(v.values[x] >= 0.0);
      CHECK(v.values[x] <= 1.0);
      CHECK(std::abs(v.values[x] - exact.values[x]) <= 1e-8);
    }
    CHECK(v.values[ProductMdp::kAcceptSink] == 1.0);
    CHECK(v.values[ProductMdp::kRejectSink] == 0.0);
  }
}

TEST_CASE("solve polishes with the exact evaluation") {
  const ProductMdp prod = make(figure2_env(0.95, 0.95), "G{0.9} g");
  const Solution s = solve(prod, 1e-6);
  CHECK(s.polished);
  CHECK(std::abs(initial_value(prod, s.values.values) - 0.1 / (1 - 0.9 * 0.95)) <= 1e-14);
  const Solution raw = solve(prod, 1e-6, kDefaultMaxIterations, 0);
  CHECK_FALSE(raw.polished);
  CHECK(std::abs(initial_value(prod, raw.values.values) - 0.1 / (1 - 0.9 * 0.95)) > 1e-9);
  CHECK(raw.values.iterations == s.values.iterations);
}

TEST_CASE("iteration cap flags non-convergence") {
  const ProductMdp prod = make(figure2_env(0.99, 0.99), "G{0.99} g");
  const ValueFunction v = value_iterate(prod, 1e-12, 3);
  CHECK_FALSE(v.converged);
  CHECK(v.iterations == 3);
  CHECK(v.residual > 1e-12);
  CHECK_THROWS_AS(value_iterate(prod, 0.0), Error);
}

TEST_CASE("exact solve rejects non-absorbing chains") {
  std::vector<std::vector<Distribution>> delta(3, std::vector<Distribution>(2));
  for (std::uint32_t v = 0; v < 2; ++v) {
    delta[0][v] = {{0, 1.0}};
    delta[1][v] = {{1, 1.0}};
    delta[2][v] = {{2, 1.0}};
  }
  const SpecMdp trap({"g"}, {"loop", "acc", "rej"}, 1, 2, delta);
  const ProductMdp prod = compose(figure2_env(1.0, 1.0), trap);
  Policy pi;
  pi.actions.assign(prod.num_states(), 0);
  pi.actions[0] = pi.actions[1] = -1;
  try {
    exact_chain_solve(prod, pi);
    FAIL("expected SingularSystem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularSystem);
  }
  // solve() falls back to the iterated values.
  const Solution s = solve(prod);
  CHECK_FALSE(s.polished);
  CHECK(initial_value(prod, s.values.values) == 0.0);
}

TEST_CASE("discounted baseline closed forms") {
  for (double p : {0.0, 0.1, 0.3, 0.7}) {
    for (double r : {-1.0, -0.48, 0.0, 0.16, 0.2, 5.0}) {
      const RewardBaseline b = reward_baseline(p, r, 0.8);
      CHECK(b.q_a1 == doctest::Approx(0.64 - 0.8 * r).epsilon(1e-10));
      CHECK(b.q_a2 == doctest::Approx((1 - p) * 0.64 - 4 * p * r).epsilon(1e-10));
    }
  }
  const RewardBaseline b = reward_baseline(0.1, 0.2, 0.8);
  CHECK(b.q_a1 == doctest::Approx(0.48));
  CHECK(b.q_a2 == doctest::Approx(0.496));
  CHECK(b.preferred == "a2");
  CHECK(reward_baseline(0.3, 5, 0.8).preferred == "a1");
  CHECK(reward_baseline(0.3, -0.5, 0.8).preferred == "a2");
  CHECK(reward_baseline(0.1, 0.1, 0.8).preferred == "a1");
}

TEST_CASE("discounted solver on its own") {
  const RewardedEnv m = figure1_rewarded(0.1, 0.2);
  const QTable q = solve_discounted(m, 0.8);
  CHECK(q.residual < 1e-12);
  const int g = m.env.state_index("g");
  CHECK(q.q[g].empty());
  CHECK(q.v[g] == 0.0);
  CHECK(q.v[m.env.state_index("b2")] == doctest::Approx(-0.8 * 0.2 / (1 - 0.8)));
  CHECK(q.v[m.env.state_index("s1")] == doctest::Approx(0.8));
  CHECK_THROWS_AS(solve_discounted(m, 1.0), Error);
  CHECK_THROWS_AS(solve_discounted(m, 0.0), Error);
}

TEST_CASE("sensitivity scan") {
  const std::vector<double> grid = {0.9, 0.95, 0.99};
  auto builder = [](double x) { return figure2_env(x, x); };
  const auto rows = sensitivity_scan(builder, Formula::always(0.9, Formula::atom("g")), grid);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    const double analytic = 0.9 * 0.1 / std::pow(1 - 0.9 * row.param, 2);
    CHECK(row.value == doctest::Approx(0.1 / (1 - 0.9 * row.param)).epsilon(1e-10));
    CHECK(row.derivative == doctest::Approx(analytic).epsilon(1e-5));
    CHECK(std::abs(row.derivative) <= 100.0);
    CHECK(std::abs(row.derivative) <= 9.0);
  }
  for (const auto& row : sensitivity_scan(builder, Formula::always(0.5, Formula::atom("g")), grid)) {
    CHECK(std::abs(row.derivative) <= 4.0);
    CHECK(std::abs(row.derivative) <= 1.0);
  }
  const std::vector<double> bad = {0.0};
  CHECK_THROWS_AS(sensitivity_scan(builder, Formula::always(0.5, Formula::atom("g")), bad), Error);
}

TEST_CASE("zero persistence in the environment leaves only the first window") {
  for (double mu : {0.5, 0.9, 0.99}) {
    const ProductMdp prod = compose(figure2_env(0.0, 0.0), compile(Formula::always(mu, Formula::atom("g"))));
    CHECK(initial_value(prod, solve(prod).values.values) == doctest::Approx(1 - mu).epsilon(1e-15));
  }
}
