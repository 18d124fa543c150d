#include "gltl/gltl.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "gltl/error.hpp"
#include "gltl/formula.hpp"
#include "gltl/product.hpp"
#include "gltl/render.hpp"
#include "gltl/serialize.hpp"
#include "gltl/solver.hpp"

struct gltl_formula {
  gltl::Formula value;
};

struct gltl_spec {
  gltl::SpecMdp value;
};

struct gltl_env {
  gltl::LabeledMdp value;
};

struct gltl_product {
  std::shared_ptr<const gltl::ProductMdp> value;
};

struct gltl_solution {
  struct InitialEntry {
    std::string env_state;
    int spec_state;
    double prob;
    std::string action;
  };

  std::shared_ptr<const gltl::ProductMdp> product;
  gltl::ValueFunction values;
  gltl::Policy policy;
  double value = 0.0;
  std::vector<InitialEntry> initial;
};

namespace {

thread_local std::string g_last_error;
thread_local long g_last_offset = -1;

gltl_status status_of(gltl::ErrorCode code) {
  using gltl::ErrorCode;
  switch (code) {
    case ErrorCode::kSyntax: return GLTL_ERR_SYNTAX;
    case ErrorCode::kMuRange: return GLTL_ERR_MU_RANGE;
    case ErrorCode::kMissingMu: return GLTL_ERR_MISSING_MU;
    case ErrorCode::kIo: return GLTL_ERR_IO;
    case ErrorCode::kSchema: return GLTL_ERR_SCHEMA;
    case ErrorCode::kValidation: return GLTL_ERR_VALIDATION;
    case ErrorCode::kInvalidGrid: return GLTL_ERR_INVALID_GRID;
    case ErrorCode::kSingularSystem: return GLTL_ERR_SINGULAR;
    case ErrorCode::kInvalidArgument: return GLTL_ERR_INVALID_ARGUMENT;
  }
  return GLTL_ERR_INTERNAL;
}

gltl_status fail(gltl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
gltl_status guarded(Body&& body) {
  g_last_error.clear();
  g_last_offset = -1;
  try {
    body();
    return GLTL_OK;
  } catch (const gltl::ParseError& e) {
    g_last_offset = static_cast<long>(e.offset());
    return fail(status_of(e.code()), e.what());
  } catch (const gltl::Error& e) {
    return fail(status_of(e.code()), std::string(gltl::to_string(e.code())) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(GLTL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GLTL_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define GLTL_REQUIRE(cond)                                                   \
  do {                                                                       \
    if (!(cond)) return fail(GLTL_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

template <class Fn>
gltl_status emit(char** out, Fn&& text) {
  GLTL_REQUIRE(out);
  return guarded([&] { *out = copy_string(text()); });
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

}  // namespace

extern "C" {

const char* gltl_last_error(void) { return g_last_error.c_str(); }
long gltl_last_error_offset(void) { return g_last_offset; }

const char* gltl_status_name(gltl_status status) {
  switch (status) {
    case GLTL_OK: return "ok";
    case GLTL_ERR_SYNTAX: return "SyntaxError";
    case GLTL_ERR_MU_RANGE: return "MuRangeError";
    case GLTL_ERR_MISSING_MU: return "MissingMuError";
    case GLTL_ERR_IO: return "IoError";
    case GLTL_ERR_SCHEMA: return "SchemaError";
    case GLTL_ERR_VALIDATION: return "ValidationError";
    case GLTL_ERR_INVALID_GRID: return "InvalidGrid";
    case GLTL_ERR_SINGULAR: return "SingularSystem";
    case GLTL_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case GLTL_ERR_INTERNAL: return "InternalError";
  }
  return "unknown";
}

void gltl_string_free(char* s) { std::free(s); }

// ---- formulas

gltl_status gltl_formula_parse(const char* text, int has_default_mu, double default_mu,
                               gltl_formula** out) {
  GLTL_REQUIRE(text && out);
  return guarded([&] {
    std::optional<double> mu;
    if (has_default_mu) mu = default_mu;
    *out = new gltl_formula{gltl::parse(text, mu)};
  });
}

void gltl_formula_free(gltl_formula* f) { delete f; }

gltl_status gltl_formula_format(const gltl_formula* f, char** out) {
  GLTL_REQUIRE(f);
  return emit(out, [&] { return gltl::format(f->value); });
}

gltl_status gltl_formula_sexpr(const gltl_formula* f, char** out) {
  GLTL_REQUIRE(f);
  return emit(out, [&] { return gltl::to_sexpr(f->value); });
}

gltl_status gltl_formula_atoms(const gltl_formula* f, char** out) {
  GLTL_REQUIRE(f);
  return emit(out, [&] { return join(gltl::atomic_props(f->value)); });
}

// ---- specs

gltl_status gltl_spec_compile(const gltl_formula* f, gltl_spec** out) {
  GLTL_REQUIRE(f && out);
  return guarded([&] { *out = new gltl_spec{gltl::compile(f->value)}; });
}

void gltl_spec_free(gltl_spec* s) { delete s; }
size_t gltl_spec_num_states(const gltl_spec* s) { return s ? s->value.num_states() : 0; }
size_t gltl_spec_num_transitions(const gltl_spec* s) { return s ? s->value.num_transitions() : 0; }

gltl_status gltl_spec_to_json(const gltl_spec* s, char** out) {
  GLTL_REQUIRE(s);
  return emit(out, [&] { return gltl::spec_to_json(s->value); });
}

gltl_status gltl_spec_to_dot(const gltl_spec* s, char** out) {
  GLTL_REQUIRE(s);
  return emit(out, [&] { return gltl::spec_to_dot(s->value); });
}

// ---- environments

gltl_status gltl_env_load(const char* path, gltl_env** out) {
  GLTL_REQUIRE(path && out);
  return guarded([&] { *out = new gltl_env{gltl::load_env(path)}; });
}

gltl_status gltl_env_builtin(const char* name, const char* const* keys, const double* values,
                             size_t n, gltl_env** out) {
  GLTL_REQUIRE(name && out && (n == 0 || (keys && values)));
  return guarded([&] {
    std::vector<std::pair<std::string, double>> params;
    for (size_t i = 0; i < n; ++i) params.emplace_back(keys[i], values[i]);
    *out = new gltl_env{gltl::builtin_env(name, params)};
  });
}

void gltl_env_free(gltl_env* e) { delete e; }
size_t gltl_env_num_states(const gltl_env* e) { return e ? e->value.num_states() : 0; }
int gltl_env_is_grid(const gltl_env* e) { return e && e->value.grid ? 1 : 0; }

// ---- products

gltl_status gltl_product_compose(const gltl_env* env, const gltl_spec* spec, gltl_product** out) {
  GLTL_REQUIRE(env && spec && out);
  return guarded([&] {
    *out = new gltl_product{
        std::make_shared<const gltl::ProductMdp>(gltl::compose(env->value, spec->value))};
  });
}

void gltl_product_free(gltl_product* p) { delete p; }

gltl_status gltl_product_stats_get(const gltl_product* p, gltl_product_stats* out) {
  GLTL_REQUIRE(p && out);
  const auto st = gltl::product_stats(*p->value);
  *out = {st.states, st.live_states, st.accepting_sinks, st.rejecting_sinks, st.actions,
          st.transitions};
  return GLTL_OK;
}

gltl_status gltl_product_warnings(const gltl_product* p, char** out) {
  GLTL_REQUIRE(p);
  return emit(out, [&] { return join(p->value->warnings()); });
}

gltl_status gltl_product_to_json(const gltl_product* p, char** out) {
  GLTL_REQUIRE(p);
  return emit(out, [&] { return gltl::product_to_json(*p->value); });
}

gltl_status gltl_product_to_dot(const gltl_product* p, char** out) {
  GLTL_REQUIRE(p);
  return emit(out, [&] { return gltl::product_to_dot(*p->value); });
}

// ---- solving

gltl_status gltl_solve(const gltl_product* p, double tol, size_t max_iter, gltl_solution** out) {
  GLTL_REQUIRE(p && out);
  return guarded([&] {
    auto sol = std::make_unique<gltl_solution>();
    sol->product = p->value;
    const gltl::ProductMdp& prod = *sol->product;
    gltl::Solution solved = gltl::solve(prod, tol, max_iter);
    sol->values = std::move(solved.values);
    sol->policy = std::move(solved.policy);
    sol->value = gltl::initial_value(prod, sol->values.values);
    for (const auto& o : prod.initial()) {
      if (prod.is_sink(o.target)) continue;
      const auto& ps = prod.state(o.target);
      sol->initial.push_back({prod.env().state_names[ps.env], ps.spec, o.prob,
                              prod.action_name(o.target, sol->policy.actions[o.target])});
    }
    *out = sol.release();
  });
}

void gltl_solution_free(gltl_solution* s) { delete s; }
double gltl_solution_value(const gltl_solution* s) { return s ? s->value : 0.0; }
int gltl_solution_converged(const gltl_solution* s) { return s && s->values.converged ? 1 : 0; }
double gltl_solution_residual(const gltl_solution* s) { return s ? s->values.residual : 0.0; }
size_t gltl_solution_iterations(const gltl_solution* s) { return s ? s->values.iterations : 0; }
size_t gltl_solution_initial_count(const gltl_solution* s) { return s ? s->initial.size() : 0; }

gltl_status gltl_solution_initial_entry(const gltl_solution* s, size_t i, const char** env_state,
                                        int* spec_state, double* prob, const char** action) {
  GLTL_REQUIRE(s);
  if (i >= s->initial.size()) return fail(GLTL_ERR_INVALID_ARGUMENT, "index out of range");
  const auto& e = s->initial[i];
  if (env_state) *env_state = e.env_state.c_str();
  if (spec_state) *spec_state = e.spec_state;
  if (prob) *prob = e.prob;
  if (action) *action = e.action.c_str();
  return GLTL_OK;
}

gltl_status gltl_solution_policy_json(const gltl_solution* s, char** out) {
  GLTL_REQUIRE(s);
  return emit(out, [&] { return gltl::policy_to_json(*s->product, s->policy); });
}

gltl_status gltl_solution_values_json(const gltl_solution* s, char** out) {
  GLTL_REQUIRE(s);
  return emit(out, [&] { return gltl::values_to_json(*s->product, s->values); });
}

// ---- simulation and rendering

gltl_status gltl_simulate(const gltl_solution* s, const gltl_sim_options* opt,
                          gltl_sim_summary* summary, char** report_json) {
  GLTL_REQUIRE(s && opt);
  return guarded([&] {
    gltl::SimulationOptions o;
    o.episodes = opt->episodes;
    o.seed = opt->seed;
    o.max_steps = opt->max_steps;
    o.workers = opt->workers == 0 ? 1 : opt->workers;
    const auto report = gltl::simulate(*s->product, s->policy, o);
    if (summary) {
      *summary = {report.episodes, report.accepted, report.rejected, report.censored,
                  report.rate,     report.half_width};
    }
    if (report_json) *report_json = copy_string(gltl::simulation_to_json(*s->product, report, o));
  });
}

gltl_status gltl_render_grid(const gltl_solution* s, int draw_path, int color, char** out) {
  GLTL_REQUIRE(s);
  return emit(out, [&] {
    return gltl::render_grid(*s->product, s->policy, {draw_path != 0, color != 0});
  });
}

// ---- reward baseline

gltl_status gltl_reward_baseline(double p, double r, double gamma,
                                 gltl_reward_baseline_result* out) {
  GLTL_REQUIRE(out);
  return guarded([&] {
    const auto rb = gltl::reward_baseline(p, r, gamma);
    *out = {rb.q_a1, rb.q_a2, rb.preferred == "a2" ? 2 : 1};
  });
}

}  // extern "C"
