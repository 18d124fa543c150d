#include "gltl/serialize.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "gltl/error.hpp"

namespace gltl {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string fixed6(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", p);
  return buf;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

const char* outcome_name(EpisodeOutcome o) {
  switch (o) {
    case EpisodeOutcome::kAccepted: return "accept";
    case EpisodeOutcome::kRejected: return "reject";
    case EpisodeOutcome::kCensored: return "censored";
  }
  return "unknown";
}

}  // namespace

std::string valuation_text(const SpecMdp& m, Valuation v) {
  if (m.atoms().empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < m.atoms().size(); ++i) {
    if (i) out += '&';
    if (!v.holds(i)) out += '!';
    out += m.atoms()[i];
  }
  return out;
}

std::string spec_to_json(const SpecMdp& m) {
  ordered_json j;
  j["ap"] = m.atoms();
  ordered_json states = ordered_json::array();
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    states.push_back({{"id", q}, {"name", m.state_name(static_cast<int>(q))}});
  }
  j["states"] = std::move(states);
  j["initial"] = m.initial();
  j["accept"] = m.accept();
  j["reject"] = m.reject();
  ordered_json transitions = ordered_json::array();
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    if (m.is_terminal(static_cast<int>(q))) continue;
    for (std::size_t v = 0; v < m.num_valuations(); ++v) {
      const Valuation val{static_cast<std::uint32_t>(v)};
      ordered_json valuation = ordered_json::object();
      for (std::size_t i = 0; i < m.atoms().size(); ++i) valuation[m.atoms()[i]] = val.holds(i);
      for (const auto& o : m.next(static_cast<int>(q), val)) {
        transitions.push_back(
            {{"from", q}, {"valuation", valuation}, {"to", o.target}, {"prob", o.prob}});
      }
    }
  }
  j["transitions"] = std::move(transitions);
  return dump(j);
}

std::string spec_to_dot(const SpecMdp& m) {
  std::ostringstream out;
  out << "digraph spec {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    const int id = static_cast<int>(q);
    out << "  q" << q;
    if (id == m.accept()) {
      out << " [shape=doublecircle, label=\"acc\"]";
    } else if (id == m.reject()) {
      out << " [shape=doublecircle, label=\"rej\"]";
    } else {
      out << " [label=\"q" << q << "\", tooltip=\"" << dot_escape(m.state_name(id)) << "\"]";
    }
    out << ";\n";
  }
  out << "  start [shape=point];\n  start -> q" << m.initial() << ";\n";
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    if (m.is_terminal(static_cast<int>(q))) continue;
    for (std::size_t v = 0; v < m.num_valuations(); ++v) {
      const Valuation val{static_cast<std::uint32_t>(v)};
      for (const auto& o : m.next(static_cast<int>(q), val)) {
        out << "  q" << q << " -> q" << o.target << " [label=\"" << valuation_text(m, val)
            << " / " << fixed6(o.prob) << "\"];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

std::string env_to_json(const LabeledMdp& env) {
  ordered_json j;
  j["type"] = "mdp";
  j["states"] = env.state_names;
  j["initial"] = env.state_names.at(env.initial);
  ordered_json labels = ordered_json::object();
  for (std::size_t s = 0; s < env.num_states(); ++s) {
    if (!env.labels[s].empty()) labels[env.state_names[s]] = env.labels[s];
  }
  j["labels"] = std::move(labels);
  ordered_json transitions = ordered_json::array();
  for (std::size_t s = 0; s < env.num_states(); ++s) {
    for (std::size_t a = 0; a < env.transitions[s].size(); ++a) {
      for (const auto& o : env.transitions[s][a]) {
        transitions.push_back({{"from", env.state_names[s]},
                               {"action", env.action_names[s][a]},
                               {"to", env.state_names[o.target]},
                               {"prob", o.prob}});
      }
    }
  }
  j["transitions"] = std::move(transitions);
  return dump(j);
}

std::string product_to_json(const ProductMdp& p) {
  ordered_json j;
  j["type"] = "product";
  ordered_json states = ordered_json::array();
  for (std::size_t x = 0; x < p.num_states(); ++x) states.push_back(p.state_name(static_cast<int>(x)));
  j["states"] = std::move(states);
  ordered_json init = ordered_json::array();
  for (const auto& o : p.initial()) init.push_back({{"state", p.state_name(o.target)}, {"prob", o.prob}});
  j["initial_distribution"] = std::move(init);
  ordered_json labels = ordered_json::object();
  for (std::size_t x = 2; x < p.num_states(); ++x) {
    const auto& l = p.env().labels[p.state(static_cast<int>(x)).env];
    if (!l.empty()) labels[p.state_name(static_cast<int>(x))] = l;
  }
  j["labels"] = std::move(labels);
  ordered_json transitions = ordered_json::array();
  for (std::size_t x = 0; x < p.num_states(); ++x) {
    const int xs = static_cast<int>(x);
    for (std::size_t a = 0; a < p.num_actions(xs); ++a) {
      for (const auto& o : p.next(xs, static_cast<int>(a))) {
        transitions.push_back({{"from", p.state_name(xs)},
                               {"action", p.action_name(xs, static_cast<int>(a))},
                               {"to", p.state_name(o.target)},
                               {"prob", o.prob}});
      }
    }
  }
  j["transitions"] = std::move(transitions);
  j["accepting"] = {p.state_name(ProductMdp::kAcceptSink)};
  j["rejecting"] = {p.state_name(ProductMdp::kRejectSink)};
  return dump(j);
}

std::string product_to_dot(const ProductMdp& p) {
  if (p.num_states() >= 200) {
    throw Error(ErrorCode::kInvalidArgument, "DOT export is limited to products below 200 states");
  }
  std::ostringstream out;
  out << "digraph product {\n  node [shape=box];\n";
  for (std::size_t x = 0; x < p.num_states(); ++x) {
    out << "  x" << x << " [label=\"" << dot_escape(p.state_name(static_cast<int>(x))) << "\"";
    if (p.is_sink(static_cast<int>(x))) out << ", peripheries=2";
    out << "];\n";
  }
  out << "  start [shape=point];\n";
  for (const auto& o : p.initial()) out << "  start -> x" << o.target << " [label=\"" << fixed6(o.prob) << "\"];\n";
  for (std::size_t x = 2; x < p.num_states(); ++x) {
    const int xs = static_cast<int>(x);
    for (std::size_t a = 0; a < p.num_actions(xs); ++a) {
      for (const auto& o : p.next(xs, static_cast<int>(a))) {
        out << "  x" << x << " -> x" << o.target << " [label=\""
            << dot_escape(p.action_name(xs, static_cast<int>(a))) << " / " << fixed6(o.prob)
            << (o.target == ProductMdp::kAcceptSink ? " / +1" : "") << "\"];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

std::string policy_to_json(const ProductMdp& p, const Policy& pi) {
  ordered_json j = ordered_json::array();
  for (std::size_t x = 2; x < p.num_states(); ++x) {
    const auto& ps = p.state(static_cast<int>(x));
    j.push_back({{"env_state", p.env().state_names[ps.env]},
                 {"spec_state", ps.spec},
                 {"action", p.action_name(static_cast<int>(x), pi.actions.at(x))}});
  }
  return dump(j);
}

std::string values_to_json(const ProductMdp& p, const ValueFunction& v) {
  ordered_json j = ordered_json::array();
  for (std::size_t x = 0; x < p.num_states(); ++x) {
    const auto& ps = p.state(static_cast<int>(x));
    ordered_json row;
    if (ps.env < 0) {
      row["env_state"] = nullptr;
    } else {
      row["env_state"] = p.env().state_names[ps.env];
    }
    row["spec_state"] = ps.spec;
    row["value"] = v.values.at(x);
    j.push_back(std::move(row));
  }
  return dump(j);
}

std::string simulation_to_json(const ProductMdp& p, const SimulationReport& r,
                               const SimulationOptions& opt) {
  ordered_json j;
  j["episodes"] = r.episodes;
  j["seed"] = opt.seed;
  j["max_steps"] = opt.max_steps;
  j["accepted"] = r.accepted;
  j["rejected"] = r.rejected;
  j["censored"] = r.censored;
  j["rate"] = r.rate;
  j["half_width_3sigma"] = r.half_width;
  ordered_json trajectories = ordered_json::array();
  for (const auto& ep : r.examples) {
    ordered_json steps = ordered_json::array();
    for (const auto& st : ep.trajectory) {
      ordered_json s;
      s["env_state"] = p.env().state_names[st.env_state];
      s["spec_state"] = st.spec_state;
      s["labels"] = p.env().labels[st.env_state];
      if (st.action >= 0) {
        s["action"] = p.env().action_names[st.env_state][st.action];
      } else {
        s["action"] = nullptr;
      }
      steps.push_back(std::move(s));
    }
    trajectories.push_back({{"outcome", outcome_name(ep.outcome)}, {"steps", ep.steps}, {"trajectory", std::move(steps)}});
  }
  j["trajectories"] = std::move(trajectories);
  return dump(j);
}

}  // namespace gltl
