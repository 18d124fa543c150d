#include <doctest.h>

#include <cmath>
#include <memory>
#include <string>

#include "gltl/gltl.h"

namespace {

struct Deleter {
  void operator()(gltl_formula* p) const { gltl_formula_free(p); }
  void operator()(gltl_spec* p) const { gltl_spec_free(p); }
  void operator()(gltl_env* p) const { gltl_env_free(p); }
  void operator()(gltl_product* p) const { gltl_product_free(p); }
  void operator()(gltl_solution* p) const { gltl_solution_free(p); }
};

template <class T>
using Handle = std::unique_ptr<T, Deleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  gltl_string_free(s);
  return out;
}

Handle<gltl_formula> parse(const char* text) {
  gltl_formula* f = nullptr;
  REQUIRE(gltl_formula_parse(text, 0, 0.0, &f) == GLTL_OK);
  return Handle<gltl_formula>(f);
}

Handle<gltl_spec> compile(const char* text) {
  gltl_spec* s = nullptr;
  REQUIRE(gltl_spec_compile(parse(text).get(), &s) == GLTL_OK);
  return Handle<gltl_spec>(s);
}

Handle<gltl_env> builtin(const char* name, const char* key = nullptr, double value = 0.0) {
  gltl_env* e = nullptr;
  const char* keys[] = {key};
  const double values[] = {value};
  REQUIRE(gltl_env_builtin(name, keys, values, key ? 1 : 0, &e) == GLTL_OK);
  return Handle<gltl_env>(e);
}

Handle<gltl_solution> solve(const gltl_env* env, const char* formula) {
  gltl_product* p = nullptr;
  REQUIRE(gltl_product_compose(env, compile(formula).get(), &p) == GLTL_OK);
  Handle<gltl_product> product(p);
  gltl_solution* s = nullptr;
  REQUIRE(gltl_solve(product.get(), 1e-10, 100000, &s) == GLTL_OK);
  // The solution keeps its own reference to the product.
  return Handle<gltl_solution>(s);
}

}  // namespace

TEST_CASE("parse and print through the C API") {
  const auto f = parse("G{0.9} g");
  char* s = nullptr;
  REQUIRE(gltl_formula_sexpr(f.get(), &s) == GLTL_OK);
  CHECK(take(s) == "(always 0.9 (atom g))");
  REQUIRE(gltl_formula_format(f.get(), &s) == GLTL_OK);
  const std::string text = take(s);
  gltl_formula* again = nullptr;
  REQUIRE(gltl_formula_parse(text.c_str(), 0, 0.0, &again) == GLTL_OK);
  REQUIRE(gltl_formula_sexpr(again, &s) == GLTL_OK);
  CHECK(take(s) == "(always 0.9 (atom g))");
  gltl_formula_free(again);
  REQUIRE(gltl_formula_atoms(parse("c & (a | F{0.5} b)").get(), &s) == GLTL_OK);
  CHECK(take(s) == "a,b,c");
  CHECK(gltl_last_error()[0] == '\0');
}

TEST_CASE("parse errors carry status and offset") {
  gltl_formula* f = nullptr;
  CHECK(gltl_formula_parse("a & & b", 0, 0.0, &f) == GLTL_ERR_SYNTAX);
  CHECK(f == nullptr);
  CHECK(gltl_last_error_offset() == 4);
  CHECK(std::string(gltl_last_error()).find("offset 4") != std::string::npos);
  CHECK(gltl_formula_parse("F{1.5} a", 0, 0.0, &f) == GLTL_ERR_MU_RANGE);
  CHECK(gltl_formula_parse("F a", 0, 0.0, &f) == GLTL_ERR_MISSING_MU);
  REQUIRE(gltl_formula_parse("F a", 1, 0.9, &f) == GLTL_OK);
  gltl_formula_free(f);
  CHECK(gltl_formula_parse(nullptr, 0, 0.0, &f) == GLTL_ERR_INVALID_ARGUMENT);
  CHECK(gltl_formula_parse("a", 0, 0.0, nullptr) == GLTL_ERR_INVALID_ARGUMENT);
  CHECK(std::string(gltl_status_name(GLTL_ERR_SYNTAX)) == "SyntaxError");
  CHECK(std::string(gltl_status_name(GLTL_OK)) == "ok");
}

TEST_CASE("compile exports JSON and DOT") {
  const auto s = compile("g");
  CHECK(gltl_spec_num_states(s.get()) == 3);
  CHECK(gltl_spec_num_transitions(s.get()) == 2);
  char* text = nullptr;
  REQUIRE(gltl_spec_to_json(s.get(), &text) == GLTL_OK);
  CHECK(take(text).find("\"accept\"") != std::string::npos);
  REQUIRE(gltl_spec_to_dot(s.get(), &text) == GLTL_OK);
  CHECK(take(text).find("digraph spec") == 0);
}

TEST_CASE("environments") {
  CHECK(gltl_env_num_states(builtin("figure1").get()) == 5);
  CHECK(gltl_env_is_grid(builtin("figure2").get()) == 0);
  gltl_env* e = nullptr;
  CHECK(gltl_env_builtin("figure9", nullptr, nullptr, 0, &e) == GLTL_ERR_INVALID_ARGUMENT);
  const char* keys[] = {"p"};
  const double bad[] = {2.0};
  CHECK(gltl_env_builtin("figure1", keys, bad, 1, &e) != GLTL_OK);
  CHECK(gltl_env_load("/nonexistent/env.json", &e) == GLTL_ERR_IO);
  REQUIRE(gltl_env_load(GLTL_SOURCE_DIR "/grids/barrier.json", &e) == GLTL_OK);
  CHECK(gltl_env_is_grid(e) == 1);
  CHECK(gltl_env_num_states(e) == 25);
  gltl_env_free(e);
}

TEST_CASE("product stats and warnings") {
  const auto env = builtin("figure1");
  gltl_product* p = nullptr;
  REQUIRE(gltl_product_compose(env.get(), compile("F{0.9} (g | zzz)").get(), &p) == GLTL_OK);
  gltl_product_stats st{};
  REQUIRE(gltl_product_stats_get(p, &st) == GLTL_OK);
  CHECK(st.states == st.live_states + 2);
  CHECK(st.accepting_sinks == 1);
  CHECK(st.rejecting_sinks == 1);
  char* w = nullptr;
  REQUIRE(gltl_product_warnings(p, &w) == GLTL_OK);
  CHECK(take(w) == "zzz");
  REQUIRE(gltl_product_to_json(p, &w) == GLTL_OK);
  CHECK(take(w).find("\"product\"") != std::string::npos);
  gltl_product_free(p);
}

TEST_CASE("solve figure1 at p = 0.3") {
  const auto sol = solve(builtin("figure1", "p", 0.3).get(), "!b U{0.95} g");
  CHECK(std::abs(gltl_solution_value(sol.get()) - 0.631750) <= 1e-9);
  CHECK(gltl_solution_converged(sol.get()) == 1);
  CHECK(gltl_solution_residual(sol.get()) <= 1e-10);
  CHECK(gltl_solution_iterations(sol.get()) > 0);
  REQUIRE(gltl_solution_initial_count(sol.get()) == 1);
  const char* env_state = nullptr;
  const char* action = nullptr;
  int q = -1;
  double prob = 0.0;
  REQUIRE(gltl_solution_initial_entry(sol.get(), 0, &env_state, &q, &prob, &action) == GLTL_OK);
  CHECK(std::string(env_state) == "s0");
  CHECK(q == 0);
  // Consuming the unlabeled start state keeps the until window open w.p. mu.
  CHECK(prob == doctest::Approx(0.95));
  CHECK(std::string(action) == "a2");
  CHECK(gltl_solution_initial_entry(sol.get(), 1, &env_state, &q, &prob, &action) ==
        GLTL_ERR_INVALID_ARGUMENT);
  char* text = nullptr;
  REQUIRE(gltl_solution_policy_json(sol.get(), &text) == GLTL_OK);
  CHECK(take(text).find("\"a2\"") != std::string::npos);
  REQUIRE(gltl_solution_values_json(sol.get(), &text) == GLTL_OK);
  CHECK(take(text).find("\"value\"") != std::string::npos);
}

TEST_CASE("solve figure2") {
  const auto sol = solve(builtin("figure2").get(), "G{0.9} g");
  CHECK(std::abs(gltl_solution_value(sol.get()) - 0.1 / (1 - 0.9 * 0.95)) <= 1e-9);
}

TEST_CASE("simulate through the C API") {
  const auto sol = solve(builtin("figure2").get(), "G{0.9} g");
  gltl_sim_options opt{20000, 11, 100000, 2};
  gltl_sim_summary a{}, b{};
  char* report = nullptr;
  REQUIRE(gltl_simulate(sol.get(), &opt, &a, &report) == GLTL_OK);
  CHECK(take(report).find("\"trajectories\"") != std::string::npos);
  opt.workers = 1;
  REQUIRE(gltl_simulate(sol.get(), &opt, &b, nullptr) == GLTL_OK);
  CHECK(a.accepted == b.accepted);
  CHECK(a.episodes == 20000);
  CHECK(a.accepted + a.rejected + a.censored == a.episodes);
  const double v = gltl_solution_value(sol.get());
  CHECK(std::abs(a.rate - v) <= 3 * std::sqrt(v * (1 - v) / 20000) + 1e-9);
  opt.episodes = 0;
  CHECK(gltl_simulate(sol.get(), &opt, &a, nullptr) == GLTL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("render through the C API") {
  gltl_env* e = nullptr;
  REQUIRE(gltl_env_load(GLTL_SOURCE_DIR "/grids/barrier.json", &e) == GLTL_OK);
  Handle<gltl_env> env(e);
  const auto sol = solve(env.get(), "(!blue U{0.95} red) & F{0.95}(red & F{0.95} green)");
  char* text = nullptr;
  REQUIRE(gltl_render_grid(sol.get(), 1, 0, &text) == GLTL_OK);
  CHECK(take(text).find("path (2,3) (1,3) (0,3) (0,2) (0,1)") != std::string::npos);
  const auto other = solve(builtin("figure1").get(), "F{0.9} g");
  CHECK(gltl_render_grid(other.get(), 0, 0, &text) == GLTL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("reward baseline through the C API") {
  gltl_reward_baseline_result r{};
  REQUIRE(gltl_reward_baseline(0.1, 0.2, 0.8, &r) == GLTL_OK);
  CHECK(r.q_a1 == doctest::Approx(0.48));
  CHECK(r.q_a2 == doctest::Approx(0.496));
  CHECK(r.preferred == 2);
  REQUIRE(gltl_reward_baseline(0.1, 0.1, 0.8, &r) == GLTL_OK);
  CHECK(r.preferred == 1);
  CHECK(gltl_reward_baseline(0.1, 0.2, 1.0, &r) == GLTL_ERR_INVALID_ARGUMENT);
  CHECK(gltl_reward_baseline(0.1, 0.2, 0.8, nullptr) == GLTL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("string free accepts null") {
  gltl_string_free(nullptr);
}
