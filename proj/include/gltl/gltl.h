/*
 * C interface to the GLTL planning library.
 *
 * Every object is an opaque handle owned by the caller and released with the
 * matching *_free function. Functions return a gltl_status; on failure a
 * description is available from gltl_last_error() on the same thread.
 * Strings returned through char** are heap allocated and must be released
 * with gltl_string_free().
 */
#ifndef GLTL_GLTL_H
#define GLTL_GLTL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GLTL_BUILDING_LIBRARY)
#    define GLTL_API __declspec(dllexport)
#  else
#    define GLTL_API __declspec(dllimport)
#  endif
#else
#  define GLTL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gltl_status {
  GLTL_OK = 0,
  GLTL_ERR_SYNTAX = 1,
  GLTL_ERR_MU_RANGE = 2,
  GLTL_ERR_MISSING_MU = 3,
  GLTL_ERR_IO = 4,
  GLTL_ERR_SCHEMA = 5,
  GLTL_ERR_VALIDATION = 6,
  GLTL_ERR_INVALID_GRID = 7,
  GLTL_ERR_SINGULAR = 8,
  GLTL_ERR_INVALID_ARGUMENT = 9,
  GLTL_ERR_INTERNAL = 10
} gltl_status;

typedef struct gltl_formula gltl_formula;
typedef struct gltl_spec gltl_spec;
typedef struct gltl_env gltl_env;
typedef struct gltl_product gltl_product;
typedef struct gltl_solution gltl_solution;

/* Message for the most recent failure on this thread ("" if none). */
GLTL_API const char* gltl_last_error(void);
/* Byte offset of the most recent parse failure on this thread, or -1. */
GLTL_API long gltl_last_error_offset(void);
GLTL_API const char* gltl_status_name(gltl_status status);
GLTL_API void gltl_string_free(char* s);

/* ---- formulas ---------------------------------------------------------- */

/* has_default_mu = 0 makes windowless temporal operators an error. */
GLTL_API gltl_status gltl_formula_parse(const char* text, int has_default_mu, double default_mu,
                                        gltl_formula** out);
GLTL_API void gltl_formula_free(gltl_formula* f);
GLTL_API gltl_status gltl_formula_format(const gltl_formula* f, char** out);
GLTL_API gltl_status gltl_formula_sexpr(const gltl_formula* f, char** out);
/* Sorted atoms joined by ','. */
GLTL_API gltl_status gltl_formula_atoms(const gltl_formula* f, char** out);

/* ---- specification automata -------------------------------------------- */

GLTL_API gltl_status gltl_spec_compile(const gltl_formula* f, gltl_spec** out);
GLTL_API void gltl_spec_free(gltl_spec* s);
GLTL_API size_t gltl_spec_num_states(const gltl_spec* s);
GLTL_API size_t gltl_spec_num_transitions(const gltl_spec* s);
GLTL_API gltl_status gltl_spec_to_json(const gltl_spec* s, char** out);
GLTL_API gltl_status gltl_spec_to_dot(const gltl_spec* s, char** out);

/* ---- environments ------------------------------------------------------ */

GLTL_API gltl_status gltl_env_load(const char* path, gltl_env** out);
/* keys/values: n parameter overrides, e.g. {"p"} / {0.3}. */
GLTL_API gltl_status gltl_env_builtin(const char* name, const char* const* keys,
                                      const double* values, size_t n, gltl_env** out);
GLTL_API void gltl_env_free(gltl_env* e);
GLTL_API size_t gltl_env_num_states(const gltl_env* e);
GLTL_API int gltl_env_is_grid(const gltl_env* e);

/* ---- products ---------------------------------------------------------- */

typedef struct gltl_product_stats {
  size_t states;
  size_t live_states;
  size_t accepting_sinks;
  size_t rejecting_sinks;
  size_t actions;
  size_t transitions;
} gltl_product_stats;

GLTL_API gltl_status gltl_product_compose(const gltl_env* env, const gltl_spec* spec,
                                          gltl_product** out);
GLTL_API void gltl_product_free(gltl_product* p);
GLTL_API gltl_status gltl_product_stats_get(const gltl_product* p, gltl_product_stats* out);
/* Spec atoms never seen in environment labels, joined by ','. */
GLTL_API gltl_status gltl_product_warnings(const gltl_product* p, char** out);
GLTL_API gltl_status gltl_product_to_json(const gltl_product* p, char** out);
GLTL_API gltl_status gltl_product_to_dot(const gltl_product* p, char** out);

/* ---- solving ----------------------------------------------------------- */

GLTL_API gltl_status gltl_solve(const gltl_product* p, double tol, size_t max_iter,
                                gltl_solution** out);
GLTL_API void gltl_solution_free(gltl_solution* s);
/* Satisfaction probability under the initial distribution. */
GLTL_API double gltl_solution_value(const gltl_solution* s);
GLTL_API int gltl_solution_converged(const gltl_solution* s);
GLTL_API double gltl_solution_residual(const gltl_solution* s);
GLTL_API size_t gltl_solution_iterations(const gltl_solution* s);
/* Live product states of the initial distribution, with the chosen action.
 * Returned pointers stay valid for the lifetime of the solution. */
GLTL_API size_t gltl_solution_initial_count(const gltl_solution* s);
GLTL_API gltl_status gltl_solution_initial_entry(const gltl_solution* s, size_t i,
                                                 const char** env_state, int* spec_state,
                                                 double* prob, const char** action);
GLTL_API gltl_status gltl_solution_policy_json(const gltl_solution* s, char** out);
GLTL_API gltl_status gltl_solution_values_json(const gltl_solution* s, char** out);

/* ---- simulation and rendering ------------------------------------------ */

typedef struct gltl_sim_options {
  size_t episodes;
  uint64_t seed;
  size_t max_steps;
  unsigned workers;
} gltl_sim_options;

typedef struct gltl_sim_summary {
  size_t episodes;
  size_t accepted;
  size_t rejected;
  size_t censored;
  double rate;
  double half_width;
} gltl_sim_summary;

/* report_json may be NULL. */
GLTL_API gltl_status gltl_simulate(const gltl_solution* s, const gltl_sim_options* opt,
                                   gltl_sim_summary* summary, char** report_json);

GLTL_API gltl_status gltl_render_grid(const gltl_solution* s, int draw_path, int color,
                                      char** out);

/* ---- reward baseline --------------------------------------------------- */

typedef struct gltl_reward_baseline_result {
  double q_a1;
  double q_a2;
  int preferred; /* 1 or 2 */
} gltl_reward_baseline_result;

GLTL_API gltl_status gltl_reward_baseline(double p, double r, double gamma,
                                          gltl_reward_baseline_result* out);

#ifdef __cplusplus
}
#endif

#endif /* GLTL_GLTL_H */
