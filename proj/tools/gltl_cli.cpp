// Command-line front end. Talks to the library only through the C interface.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gltl/gltl.h"

namespace {

enum Exit { kOk = 0, kParseFailure = 1, kSemanticFailure = 2, kIoFailure = 3 };

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(gltl_status s) {
  switch (s) {
    case GLTL_OK: return kOk;
    case GLTL_ERR_SYNTAX:
    case GLTL_ERR_MU_RANGE:
    case GLTL_ERR_MISSING_MU: return kParseFailure;
    case GLTL_ERR_IO: return kIoFailure;
    default: return kSemanticFailure;
  }
}

void check(gltl_status s) {
  if (s != GLTL_OK) throw Failure{exit_code_for(s), gltl_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using FormulaPtr = std::unique_ptr<gltl_formula, Deleter<gltl_formula, gltl_formula_free>>;
using SpecPtr = std::unique_ptr<gltl_spec, Deleter<gltl_spec, gltl_spec_free>>;
using EnvPtr = std::unique_ptr<gltl_env, Deleter<gltl_env, gltl_env_free>>;
using ProductPtr = std::unique_ptr<gltl_product, Deleter<gltl_product, gltl_product_free>>;
using SolutionPtr = std::unique_ptr<gltl_solution, Deleter<gltl_solution, gltl_solution_free>>;

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  gltl_string_free(s);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Failure{kIoFailure, "IoError: cannot write '" + path + "'"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kIoFailure, "IoError: cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixed10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

struct RunConfig {
  std::string formula;
  std::string formula_file;
  std::optional<double> default_mu;
  std::string env_path;
  std::string builtin;
  std::vector<std::string> params;
  double tol = 1e-10;
  std::size_t max_iter = 1'000'000;
  std::size_t episodes = 10'000;
  std::uint64_t seed = 0;
  std::size_t max_steps = 100'000;
  unsigned workers = 1;
  std::string out;
  std::string dot;
  std::string values;
  std::string product_out;
  bool slip0 = false;
  bool stats = false;
  double p = 0.1;
  double r = 0.2;
  double gamma = 0.8;
};

FormulaPtr load_formula(const RunConfig& cfg) {
  if (!cfg.formula.empty() && !cfg.formula_file.empty()) {
    throw Failure{kSemanticFailure, "give either a formula or --formula-file, not both"};
  }
  std::string text = cfg.formula;
  if (!cfg.formula_file.empty()) {
    text = read_file(cfg.formula_file);
    // Formula files may carry '#' comment lines.
    std::istringstream lines(text);
    std::string line, kept;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t") != std::string::npos && line[line.find_first_not_of(" \t")] == '#') continue;
      kept += line + "\n";
    }
    text = kept;
  }
  if (text.empty()) throw Failure{kSemanticFailure, "no formula given"};
  gltl_formula* f = nullptr;
  const gltl_status s =
      gltl_formula_parse(text.c_str(), cfg.default_mu ? 1 : 0, cfg.default_mu.value_or(0.0), &f);
  if (s != GLTL_OK) {
    std::string msg = gltl_last_error();
    const long offset = gltl_last_error_offset();
    if (offset >= 0 && text.find('\n') == std::string::npos) {
      msg += "\n  " + text + "\n  " + std::string(static_cast<std::size_t>(offset), ' ') + "^";
    }
    throw Failure{exit_code_for(s), msg};
  }
  return FormulaPtr(f);
}

SpecPtr compile_formula(const gltl_formula* f) {
  gltl_spec* spec = nullptr;
  check(gltl_spec_compile(f, &spec));
  return SpecPtr(spec);
}

EnvPtr load_env(const RunConfig& cfg) {
  if (cfg.env_path.empty() == cfg.builtin.empty()) {
    throw Failure{kSemanticFailure, "exactly one of --env or --builtin is required"};
  }
  gltl_env* env = nullptr;
  if (!cfg.env_path.empty()) {
    if (!cfg.params.empty()) throw Failure{kSemanticFailure, "--param applies only to --builtin"};
    check(gltl_env_load(cfg.env_path.c_str(), &env));
    return EnvPtr(env);
  }
  std::vector<std::string> keys;
  std::vector<double> values;
  for (const auto& kv : cfg.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Failure{kSemanticFailure, "--param expects key=value, got '" + kv + "'"};
    }
    try {
      std::size_t used = 0;
      values.push_back(std::stod(kv.substr(eq + 1), &used));
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw Failure{kSemanticFailure, "--param value is not a number: '" + kv + "'"};
    }
    keys.push_back(kv.substr(0, eq));
  }
  std::vector<const char*> key_ptrs;
  for (const auto& k : keys) key_ptrs.push_back(k.c_str());
  check(gltl_env_builtin(cfg.builtin.c_str(), key_ptrs.data(), values.data(), keys.size(), &env));
  return EnvPtr(env);
}

struct Pipeline {
  EnvPtr env;
  ProductPtr product;
  SolutionPtr solution;
};

Pipeline solve_pipeline(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Failure{kSemanticFailure, "--tol must be positive"};
  auto formula = load_formula(cfg);
  auto spec = compile_formula(formula.get());
  Pipeline p;
  p.env = load_env(cfg);
  gltl_product* prod = nullptr;
  check(gltl_product_compose(p.env.get(), spec.get(), &prod));
  p.product.reset(prod);
  const std::string warnings = take([&] {
    char* w = nullptr;
    check(gltl_product_warnings(prod, &w));
    return w;
  }());
  if (!warnings.empty()) {
    std::cerr << "warning: UnknownProposition: never labeled in the environment, read as false: "
              << warnings << "\n";
  }
  gltl_solution* sol = nullptr;
  check(gltl_solve(prod, cfg.tol, cfg.max_iter, &sol));
  p.solution.reset(sol);
  if (!gltl_solution_converged(sol)) {
    std::cerr << "warning: NonConvergence: residual " << gltl_solution_residual(sol) << " after "
              << gltl_solution_iterations(sol) << " iterations\n";
  }
  return p;
}

void print_stats(const gltl_product* prod) {
  gltl_product_stats st{};
  check(gltl_product_stats_get(prod, &st));
  std::cout << "product states=" << st.states << " live=" << st.live_states
            << " accept_sinks=" << st.accepting_sinks << " reject_sinks=" << st.rejecting_sinks
            << " actions=" << st.actions << " transitions=" << st.transitions << "\n";
}

int cmd_parse(const RunConfig& cfg) {
  auto f = load_formula(cfg);
  char* s = nullptr;
  check(gltl_formula_sexpr(f.get(), &s));
  std::cout << take(s) << "\n";
  return kOk;
}

int cmd_compile(const RunConfig& cfg) {
  auto f = load_formula(cfg);
  auto spec = compile_formula(f.get());
  char* json = nullptr;
  check(gltl_spec_to_json(spec.get(), &json));
  const std::string json_text = take(json);
  if (!cfg.dot.empty()) {
    char* dot = nullptr;
    check(gltl_spec_to_dot(spec.get(), &dot));
    write_file(cfg.dot, take(dot));
  }
  std::ostream& counts = (cfg.out.empty() && cfg.dot.empty()) ? std::cerr : std::cout;
  if (!cfg.out.empty()) {
    write_file(cfg.out, json_text);
  } else if (cfg.dot.empty()) {
    std::cout << json_text;
  }
  counts << "states " << gltl_spec_num_states(spec.get()) << " transitions "
         << gltl_spec_num_transitions(spec.get()) << "\n";
  return kOk;
}

int cmd_solve(const RunConfig& cfg) {
  Pipeline p = solve_pipeline(cfg);
  const gltl_solution* sol = p.solution.get();
  std::cout << fixed10(gltl_solution_value(sol)) << "\n";
  for (std::size_t i = 0; i < gltl_solution_initial_count(sol); ++i) {
    const char* env_state = nullptr;
    const char* action = nullptr;
    int spec_state = 0;
    double prob = 0.0;
    check(gltl_solution_initial_entry(sol, i, &env_state, &spec_state, &prob, &action));
    std::cout << "initial " << env_state << " q" << spec_state << " prob " << fixed10(prob)
              << " action " << action << "\n";
  }
  if (cfg.stats) print_stats(p.product.get());
  if (!cfg.out.empty()) {
    char* s = nullptr;
    check(gltl_solution_policy_json(sol, &s));
    write_file(cfg.out, take(s));
  }
  if (!cfg.values.empty()) {
    char* s = nullptr;
    check(gltl_solution_values_json(sol, &s));
    write_file(cfg.values, take(s));
  }
  if (!cfg.product_out.empty()) {
    char* s = nullptr;
    check(gltl_product_to_json(p.product.get(), &s));
    write_file(cfg.product_out, take(s));
  }
  if (!cfg.dot.empty()) {
    char* s = nullptr;
    check(gltl_product_to_dot(p.product.get(), &s));
    write_file(cfg.dot, take(s));
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg) {
  if (cfg.episodes < 1) throw Failure{kSemanticFailure, "--episodes must be at least 1"};
  if (cfg.workers < 1) throw Failure{kSemanticFailure, "--workers must be at least 1"};
  Pipeline p = solve_pipeline(cfg);
  const gltl_sim_options opt{cfg.episodes, cfg.seed, cfg.max_steps, cfg.workers};
  gltl_sim_summary summary{};
  char* report = nullptr;
  check(gltl_simulate(p.solution.get(), &opt, &summary, cfg.out.empty() ? nullptr : &report));
  if (!cfg.out.empty()) write_file(cfg.out, take(report));
  std::cout << "value " << fixed10(gltl_solution_value(p.solution.get())) << "\n"
            << "rate " << fixed10(summary.rate) << "\n"
            << "half_width_3sigma " << fixed10(summary.half_width) << "\n"
            << "accepted " << summary.accepted << " rejected " << summary.rejected
            << " censored " << summary.censored << " episodes " << summary.episodes << "\n";
  return kOk;
}

int cmd_render(const RunConfig& cfg) {
  Pipeline p = solve_pipeline(cfg);
  if (!gltl_env_is_grid(p.env.get())) throw Failure{kSemanticFailure, "render needs a grid environment"};
  const bool color = std::getenv("GLTL_NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
  char* s = nullptr;
  check(gltl_render_grid(p.solution.get(), cfg.slip0 ? 1 : 0, color ? 1 : 0, &s));
  std::cout << "satisfaction " << fixed10(gltl_solution_value(p.solution.get())) << "\n"
            << take(s);
  return kOk;
}

int cmd_reward_baseline(const RunConfig& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    throw Failure{kSemanticFailure, "--gamma must lie in (0, 1)"};
  }
  gltl_reward_baseline_result res{};
  check(gltl_reward_baseline(cfg.p, cfg.r, cfg.gamma, &res));
  std::cout << "Q(s0,a1) " << fixed10(res.q_a1) << "\n"
            << "Q(s0,a2) " << fixed10(res.q_a2) << "\n"
            << "preferred a" << res.preferred << "\n";
  return kOk;
}

void add_formula_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("formula,--formula", cfg.formula, "GLTL formula text");
  cmd->add_option("--formula-file", cfg.formula_file, "read the formula from a file");
  cmd->add_option("--default-mu", cfg.default_mu, "window value for operators written without {mu}");
}

void add_env_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--env", cfg.env_path, "environment JSON file (generic MDP or grid)");
  cmd->add_option("--builtin", cfg.builtin, "builtin environment")
      ->check(CLI::IsMember({"figure1", "figure2"}));
  cmd->add_option("--param", cfg.params, "builtin parameter override key=value (repeatable)")
      ->allow_extra_args(false);
  cmd->add_option("--tol", cfg.tol, "value iteration tolerance");
  cmd->add_option("--max-iter", cfg.max_iter, "value iteration iteration cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile GLTL formulas into specification MDPs and plan against them"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  RunConfig cfg;

  auto* parse = app.add_subcommand("parse", "print the syntax tree as an S-expression");
  add_formula_options(parse, cfg);

  auto* compile = app.add_subcommand("compile", "compile a formula into a specification MDP");
  add_formula_options(compile, cfg);
  compile->add_option("--out", cfg.out, "write the automaton as JSON");
  compile->add_option("--dot", cfg.dot, "write the automaton as DOT");

  auto* solve = app.add_subcommand("solve", "maximize satisfaction probability in an environment");
  add_formula_options(solve, cfg);
  add_env_options(solve, cfg);
  solve->add_option("--out", cfg.out, "write the policy as JSON");
  solve->add_option("--values", cfg.values, "write the value function as JSON");
  solve->add_option("--product", cfg.product_out, "write the product MDP as JSON");
  solve->add_option("--dot", cfg.dot, "write the product MDP as DOT (< 200 states)");
  solve->add_flag("--stats", cfg.stats, "print product size statistics");

  auto* simulate = app.add_subcommand("simulate", "roll out the optimal policy");
  add_formula_options(simulate, cfg);
  add_env_options(simulate, cfg);
  simulate->add_option("--episodes", cfg.episodes, "number of episodes");
  simulate->add_option("--seed", cfg.seed, "random seed");
  simulate->add_option("--max-steps", cfg.max_steps, "censoring horizon per episode");
  simulate->add_option("--workers", cfg.workers, "parallel worker threads");
  simulate->add_option("--out", cfg.out, "write the simulation report as JSON");

  auto* render = app.add_subcommand("render", "draw a grid environment with its policy");
  add_formula_options(render, cfg);
  add_env_options(render, cfg);
  render->add_flag("--slip0", cfg.slip0, "draw the zero-slip greedy rollout");

  auto* baseline = app.add_subcommand("reward-baseline", "discounted-reward Q values on figure1");
  baseline->add_option("--p", cfg.p, "slip probability of a2");
  baseline->add_option("--r", cfg.r, "penalty for entering a bad state");
  baseline->add_option("--gamma", cfg.gamma, "discount factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSemanticFailure;
  }

  try {
    if (parse->parsed()) return cmd_parse(cfg);
    if (compile->parsed()) return cmd_compile(cfg);
    if (solve->parsed()) return cmd_solve(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (render->parsed()) return cmd_render(cfg);
    if (baseline->parsed()) return cmd_reward_baseline(cfg);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  }
  return kSemanticFailure;
}
