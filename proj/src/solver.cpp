#include "gltl/solver.hpp"

#include <algorithm>
#include <cmath>

#include "gltl/error.hpp"

namespace gltl {

namespace {

double expected(const Distribution& d, const std::vector<double>& v) {
  double s = 0.0;
  for (const auto& o : d) s += o.prob * v[o.target];
  return s;
}

}  // namespace

ValueFunction value_iterate(const ProductMdp& p, double tol, std::size_t max_iter) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  const std::size_t n = p.num_states();
  ValueFunction out;
  out.values.assign(n, 0.0);
  out.values[ProductMdp::kAcceptSink] = 1.0;
  std::vector<double> next = out.values;

  out.converged = false;
  out.residual = n > 2 ? 1.0 : 0.0;
  if (n <= 2) {
    out.converged = true;
    return out;
  }
  while (out.iterations < max_iter) {
    double residual = 0.0;
    for (std::size_t x = 2; x < n; ++x) {
      double best = 0.0;
      for (std::size_t a = 0; a < p.num_actions(static_cast<int>(x)); ++a) {
        best = std::max(best, expected(p.next(static_cast<int>(x), static_cast<int>(a)), out.values));
      }
      next[x] = std::min(best, 1.0);
      residual = std::max(residual, std::abs(next[x] - out.values[x]));
    }
    out.values.swap(next);
    ++out.iterations;
    out.residual = residual;
    if (residual < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Policy extract_policy(const ProductMdp& p, const ValueFunction& v) {
  constexpr double kTieTol = 1e-12;
  Policy pi;
  pi.actions.assign(p.num_states(), -1);
  for (std::size_t x = 2; x < p.num_states(); ++x) {
    const int xs = static_cast<int>(x);
    std::vector<double> q(p.num_actions(xs));
    for (std::size_t a = 0; a < q.size(); ++a) q[a] = expected(p.next(xs, static_cast<int>(a)), v.values);
    const double best = *std::max_element(q.begin(), q.end());
    const auto it = std::find_if(q.begin(), q.end(), [&](double x) { return x >= best - kTieTol; });
    pi.actions[x] = static_cast<int>(it - q.begin());
  }
  return pi;
}

ValueFunction exact_chain_solve(const ProductMdp& p, const Policy& pi) {
  const std::size_t n = p.num_states();
  const std::size_t m = n - 2;  // transient states are exactly the live ones
  if (pi.actions.size() != n) throw Error(ErrorCode::kInvalidArgument, "policy does not match product");

  // Row-major (I - Q | b).
  std::vector<double> a(m * (m + 1), 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * (m + 1) + c]; };
  for (std::size_t i = 0; i < m; ++i) {
    const int x = static_cast<int>(i + 2);
    const int act = pi.actions[x];
    if (act < 0 || static_cast<std::size_t>(act) >= p.num_actions(x)) {
      throw Error(ErrorCode::kInvalidArgument, "policy undefined at " + p.state_name(x));
    }
    at(i, i) += 1.0;
    for (const auto& o : p.next(x, act)) {
      if (o.target == ProductMdp::kAcceptSink) {
        at(i, m) += o.prob;
      } else if (o.target != ProductMdp::kRejectSink) {
        at(i, static_cast<std::size_t>(o.target) - 2) -= o.prob;
      }
    }
  }

  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
    }
    if (std::abs(at(pivot, col)) < 1e-13) {
      throw Error(ErrorCode::kSingularSystem,
                  "absorption system is singular; the induced chain does not absorb");
    }
    if (pivot != col) {
      for (std::size_t c = col; c <= m; ++c) std::swap(at(pivot, c), at(col, c));
    }
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = at(r, col) / at(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= m; ++c) at(r, c) -= f * at(col, c);
    }
  }

  ValueFunction out;
  out.values.assign(n, 0.0);
  out.values[ProductMdp::kAcceptSink] = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    double s = at(i, m);
    for (std::size_t c = i + 1; c < m; ++c) s -= at(i, c) * out.values[c + 2];
    out.values[i + 2] = s / at(i, i);
  }
  return out;
}

double initial_value(const ProductMdp& p, const std::vector<double>& values) {
  return expected(p.initial(), values);
}

Solution solve(const ProductMdp& p, double tol, std::size_t max_iter, std::size_t polish_limit) {
  Solution out;
  out.values = value_iterate(p, tol, max_iter);
  out.policy = extract_policy(p, out.values);
  if (p.num_states() - 2 > polish_limit) return out;
  try {
    ValueFunction exact = exact_chain_solve(p, out.policy);
    exact.converged = out.values.converged;
    exact.residual = out.values.residual;
    exact.iterations = out.values.iterations;
    out.values = std::move(exact);
    out.polished = true;
  } catch (const Error& e) {
    // A greedy policy can idle in a non-absorbing loop when VI stopped early.
    if (e.code() != ErrorCode::kSingularSystem) throw;
  }
  return out;
}

// ---------------------------------------------------------------------------

QTable solve_discounted(const RewardedEnv& m, double gamma, double tol, std::size_t max_iter) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "discount must lie in (0, 1)");
  }
  const auto& env = m.env;
  const std::size_t n = env.num_states();
  if (m.entry_reward.size() != n || m.terminal.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "reward annotation does not match the environment");
  }
  QTable out;
  out.v.assign(n, 0.0);
  out.q.assign(n, {});
  auto backup = [&](std::size_t s, std::size_t a) {
    double q = 0.0;
    for (const auto& o : env.transitions[s][a]) {
      q += o.prob * gamma * (m.entry_reward[o.target] + out.v[o.target]);
    }
    return q;
  };
  while (out.iterations < max_iter) {
    std::vector<double> next(n, 0.0);
    double residual = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (m.terminal[s]) continue;
      double best = -INFINITY;
      for (std::size_t a = 0; a < env.transitions[s].size(); ++a) best = std::max(best, backup(s, a));
      next[s] = best;
      residual = std::max(residual, std::abs(best - out.v[s]));
    }
    out.v.swap(next);
    ++out.iterations;
    out.residual = residual;
    if (residual < tol) break;
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (m.terminal[s]) continue;
    for (std::size_t a = 0; a < env.transitions[s].size(); ++a) out.q[s].push_back(backup(s, a));
  }
  return out;
}

RewardedEnv figure1_rewarded(double p, double r, double goal_reward) {
  RewardedEnv m{figure1_env(p), {}, {}};
  for (const auto& labels : m.env.labels) {
    const bool bad = std::find(labels.begin(), labels.end(), "b") != labels.end();
    const bool goal = std::find(labels.begin(), labels.end(), "g") != labels.end();
    m.entry_reward.push_back(goal ? goal_reward : bad ? -r : 0.0);
    m.terminal.push_back(goal);
  }
  return m;
}

RewardBaseline reward_baseline(double p, double r, double gamma) {
  const RewardedEnv m = figure1_rewarded(p, r);
  const QTable q = solve_discounted(m, gamma);
  const int s0 = m.env.state_index("s0");
  RewardBaseline out;
  out.q_a1 = q.q[s0][0];
  out.q_a2 = q.q[s0][1];
  out.preferred = out.q_a2 > out.q_a1 ? "a2" : "a1";
  return out;
}

// ---------------------------------------------------------------------------

double optimal_satisfaction(const LabeledMdp& env, const SpecMdp& spec) {
  const ProductMdp p = compose(env, spec);
  const ValueFunction vi = value_iterate(p, 1e-12);
  return initial_value(p, exact_chain_solve(p, extract_policy(p, vi)).values);
}

std::vector<SensitivityRow> sensitivity_scan(const EnvBuilder& builder, const Formula& f,
                                             std::span<const double> params, double step) {
  const SpecMdp spec = compile(f);
  std::vector<SensitivityRow> rows;
  for (double x : params) {
    if (!(x > 0.0 && x < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "sensitivity grid points must lie strictly inside (0, 1)");
    }
    const double h = std::min({step, x / 2.0, (1.0 - x) / 2.0});
    const double hi = optimal_satisfaction(builder(x + h), spec);
    const double lo = optimal_satisfaction(builder(x - h), spec);
    rows.push_back({x, optimal_satisfaction(builder(x), spec), (hi - lo) / (2.0 * h)});
  }
  return rows;
}

}  // namespace gltl
