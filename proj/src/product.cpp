#include "gltl/product.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gltl/error.hpp"

namespace gltl {

namespace {
const std::string kStay = "stay";
}

ProductMdp::ProductMdp(LabeledMdp env, SpecMdp spec) : env_(std::move(env)), spec_(std::move(spec)) {
  validate(env_);

  std::set<std::string> vocabulary;
  for (const auto& labels : env_.labels) vocabulary.insert(labels.begin(), labels.end());
  for (const auto& atom : spec_.atoms()) {
    if (!vocabulary.count(atom)) warnings_.push_back(atom);
  }
  for (const auto& labels : env_.labels) env_valuation_.push_back(spec_.valuation_of(labels));

  const std::size_t n_env = env_.num_states();
  const std::size_t n_spec = spec_.num_states();
  index_.assign(n_env * n_spec, -1);
  states_ = {{-1, spec_.accept()}, {-1, spec_.reject()}};
  transitions_ = {{{{kAcceptSink, 1.0}}}, {{{kRejectSink, 1.0}}}};

  auto intern = [&](int s, int q) {
    if (q == spec_.accept()) return kAcceptSink;
    if (q == spec_.reject()) return kRejectSink;
    int& slot = index_[static_cast<std::size_t>(s) * n_spec + q];
    if (slot < 0) {
      slot = static_cast<int>(states_.size());
      states_.push_back({s, q});
    }
    return slot;
  };

  auto successors = [&](int s_next, int q, double weight, std::map<int, double>& mass) {
    for (const auto& o : spec_step(q, s_next)) mass[intern(s_next, o.target)] += weight * o.prob;
  };

  {
    std::map<int, double> mass;
    successors(env_.initial, spec_.initial(), 1.0, mass);
    for (const auto& [x, p] : mass) initial_.push_back({x, p});
  }

  for (std::size_t x = 2; x < states_.size(); ++x) {
    const ProductState ps = states_[x];
    std::vector<Distribution> rows;
    for (const auto& env_dist : env_.transitions[ps.env]) {
      std::map<int, double> mass;
      for (const auto& e : env_dist) successors(e.target, ps.spec, e.prob, mass);
      Distribution d;
      for (const auto& [y, p] : mass) {
        if (p > 0.0) d.push_back({y, p});
      }
      rows.push_back(std::move(d));
    }
    transitions_.push_back(std::move(rows));
  }
}

const std::string& ProductMdp::action_name(int x, int a) const {
  if (is_sink(x)) return kStay;
  return env_.action_names.at(states_.at(x).env).at(a);
}

int ProductMdp::index_of(int env_state, int spec_state) const {
  if (env_state < 0 || spec_state < 0 || static_cast<std::size_t>(env_state) >= env_.num_states() ||
      static_cast<std::size_t>(spec_state) >= spec_.num_states()) {
    return -1;
  }
  return index_[static_cast<std::size_t>(env_state) * spec_.num_states() + spec_state];
}

const Distribution& ProductMdp::spec_step(int q, int env_state) const {
  return spec_.next(q, env_valuation_.at(env_state));
}

std::string ProductMdp::state_name(int x) const {
  if (x == kAcceptSink) return "accept";
  if (x == kRejectSink) return "reject";
  const auto& ps = states_.at(x);
  return "(" + env_.state_names[ps.env] + ",q" + std::to_string(ps.spec) + ")";
}

ProductMdp compose(LabeledMdp env, SpecMdp spec) {
  return ProductMdp(std::move(env), std::move(spec));
}

ProductStats product_stats(const ProductMdp& p) {
  ProductStats st;
  st.states = p.num_states();
  st.live_states = p.num_states() - 2;
  st.accepting_sinks = 1;
  st.rejecting_sinks = 1;
  for (std::size_t x = 2; x < p.num_states(); ++x) {
    st.actions += p.num_actions(static_cast<int>(x));
    for (std::size_t a = 0; a < p.num_actions(static_cast<int>(x)); ++a) {
      st.transitions += p.next(static_cast<int>(x), static_cast<int>(a)).size();
    }
  }
  return st;
}

}  // namespace gltl
