#include "gltl/env_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gltl/error.hpp"

namespace gltl {

using nlohmann::json;

namespace {

constexpr double kMassTol = 1e-9;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::kValidation, msg); }

[[noreturn]] void schema(const std::string& field, const std::string& reason) {
  throw Error(ErrorCode::kSchema, "field '" + field + "': " + reason);
}

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, what + " must lie in [0, 1]");
  }
}

Distribution normalize(std::map<int, double> mass) {
  Distribution d;
  for (const auto& [t, p] : mass) {
    if (p > 0.0) d.push_back({t, p});
  }
  return d;
}

}  // namespace

int LabeledMdp::state_index(const std::string& name) const {
  auto it = std::find(state_names.begin(), state_names.end(), name);
  return it == state_names.end() ? -1 : static_cast<int>(it - state_names.begin());
}

void validate(const LabeledMdp& env) {
  const std::size_t n = env.num_states();
  if (n == 0) invalid("environment has no states");
  if (env.action_names.size() != n || env.transitions.size() != n || env.labels.size() != n) {
    invalid("per-state tables do not match the state count");
  }
  if (env.initial < 0 || static_cast<std::size_t>(env.initial) >= n) {
    invalid("initial state out of range");
  }
  for (std::size_t s = 0; s < n; ++s) {
    const auto& name = env.state_names[s];
    if (env.action_names[s].empty()) invalid("state '" + name + "' has no actions");
    if (env.action_names[s].size() != env.transitions[s].size()) {
      invalid("state '" + name + "' has mismatched action tables");
    }
    for (std::size_t a = 0; a < env.transitions[s].size(); ++a) {
      double sum = 0.0;
      for (const auto& o : env.transitions[s][a]) {
        if (o.target < 0 || static_cast<std::size_t>(o.target) >= n) {
          invalid("transition from '" + name + "' targets an unknown state");
        }
        if (!(o.prob >= 0.0 && o.prob <= 1.0)) {
          invalid("transition from '" + name + "' has probability outside [0, 1]");
        }
        sum += o.prob;
      }
      if (std::abs(sum - 1.0) > kMassTol) {
        std::ostringstream msg;
        msg << "distribution of ('" << name << "', '" << env.action_names[s][a]
            << "') sums to " << sum;
        invalid(msg.str());
      }
    }
    if (!std::is_sorted(env.labels[s].begin(), env.labels[s].end())) {
      invalid("labels of '" + name + "' are not sorted");
    }
  }
}

// ---------------------------------------------------------------------------
// Grids

int grid_state(const GridSpec& g, Cell c) { return c.y * g.width + c.x; }

Cell grid_cell(const GridSpec& g, int state) { return {state % g.width, state / g.width}; }

Cell step(const GridSpec& g, Cell c, Direction d) {
  Cell n = c;
  switch (d) {
    case Direction::kNorth: ++n.y; break;
    case Direction::kSouth: --n.y; break;
    case Direction::kEast: ++n.x; break;
    case Direction::kWest: --n.x; break;
  }
  if (n.x < 0 || n.y < 0 || n.x >= g.width || n.y >= g.height) return c;
  return n;
}

LabeledMdp grid_to_mdp(const GridSpec& g) {
  auto in_bounds = [&](Cell c) { return c.x >= 0 && c.y >= 0 && c.x < g.width && c.y < g.height; };
  if (g.width <= 0 || g.height <= 0) throw Error(ErrorCode::kInvalidGrid, "grid dimensions must be positive");
  if (!(g.slip >= 0.0 && g.slip <= 1.0 / 3.0)) {
    throw Error(ErrorCode::kInvalidGrid, "slip must lie in [0, 1/3]");
  }
  if (!in_bounds(g.start)) throw Error(ErrorCode::kInvalidGrid, "start cell out of bounds");
  for (const auto& [c, labels] : g.cells) {
    if (!in_bounds(c)) {
      throw Error(ErrorCode::kInvalidGrid, "labeled cell (" + std::to_string(c.x) + "," +
                                               std::to_string(c.y) + ") out of bounds");
    }
  }

  LabeledMdp env;
  const int n = g.width * g.height;
  for (int s = 0; s < n; ++s) {
    const Cell c = grid_cell(g, s);
    env.state_names.push_back("(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")");
    env.action_names.push_back({"north", "south", "east", "west"});
    std::vector<Distribution> rows;
    for (Direction intended : kDirections) {
      std::map<int, double> mass;
      for (Direction actual : kDirections) {
        const double p = actual == intended ? 1.0 - 3.0 * g.slip : g.slip;
        mass[grid_state(g, step(g, c, actual))] += p;
      }
      rows.push_back(normalize(std::move(mass)));
    }
    env.transitions.push_back(std::move(rows));
    std::vector<std::string> labels;
    if (auto it = g.cells.find(c); it != g.cells.end()) labels = it->second;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    env.labels.push_back(std::move(labels));
  }
  env.initial = grid_state(g, g.start);
  env.grid = g;
  return env;
}

// ---------------------------------------------------------------------------
// Builtins

LabeledMdp figure1_env(double p) {
  check_probability(p, "p");
  enum { s0, b1, s1, b2, g };
  LabeledMdp env;
  env.state_names = {"s0", "b1", "s1", "b2", "g"};
  env.action_names = {{"a1", "a2"}, {"go"}, {"go"}, {"go"}, {"go"}};
  env.transitions = {
      {{{b1, 1.0}}, normalize({{s1, 1.0 - p}, {b2, p}})},
      {{{g, 1.0}}},
      {{{g, 1.0}}},
      {{{b2, 1.0}}},
      {{{g, 1.0}}},
  };
  env.labels = {{}, {"b"}, {}, {"b"}, {"g"}};
  env.initial = s0;
  return env;
}

LabeledMdp figure2_env(double p1, double p2) {
  check_probability(p1, "p1");
  check_probability(p2, "p2");
  enum { g0, x };
  LabeledMdp env;
  env.state_names = {"g0", "x"};
  env.action_names = {{"a1", "a2"}, {"stay"}};
  env.transitions = {
      {normalize({{g0, p1}, {x, 1.0 - p1}}), normalize({{g0, p2}, {x, 1.0 - p2}})},
      {{{x, 1.0}}},
  };
  env.labels = {{"g"}, {}};
  env.initial = g0;
  return env;
}

LabeledMdp builtin_env(const std::string& name,
                       const std::vector<std::pair<std::string, double>>& params) {
  auto lookup = [&](const std::set<std::string>& allowed, std::map<std::string, double> values) {
    for (const auto& [k, v] : params) {
      if (!allowed.count(k)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "builtin '" + name + "' has no parameter '" + k + "'");
      }
      values[k] = v;
    }
    return values;
  };
  if (name == "figure1") {
    auto v = lookup({"p"}, {{"p", 0.1}});
    return figure1_env(v["p"]);
  }
  if (name == "figure2") {
    auto v = lookup({"p1", "p2"}, {{"p1", 0.95}, {"p2", 0.95}});
    return figure2_env(v["p1"], v["p2"]);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown builtin environment '" + name + "'");
}

// ---------------------------------------------------------------------------
// JSON loading

namespace {

const json& field(const json& obj, const std::string& key) {
  if (!obj.is_object()) schema(key, "enclosing value is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(key, "missing");
  return *it;
}

std::string get_string(const json& obj, const std::string& key) {
  const json& v = field(obj, key);
  if (!v.is_string()) schema(key, "expected a string");
  return v.get<std::string>();
}

double get_number(const json& obj, const std::string& key) {
  const json& v = field(obj, key);
  if (!v.is_number()) schema(key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key) {
  const json& v = field(obj, key);
  if (!v.is_number_integer()) schema(key, "expected an integer");
  return v.get<int>();
}

std::vector<std::string> get_string_list(const json& v, const std::string& key) {
  if (!v.is_array()) schema(key, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) schema(key, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

LabeledMdp generic_from_json(const json& doc) {
  LabeledMdp env;
  env.state_names = get_string_list(field(doc, "states"), "states");
  if (env.state_names.empty()) invalid("environment has no states");
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < env.state_names.size(); ++i) {
    if (!index.emplace(env.state_names[i], static_cast<int>(i)).second) {
      invalid("duplicate state '" + env.state_names[i] + "'");
    }
  }
  auto resolve = [&](const std::string& name, const std::string& where) {
    auto it = index.find(name);
    if (it == index.end()) invalid(where + " references unknown state '" + name + "'");
    return it->second;
  };

  env.initial = resolve(get_string(doc, "initial"), "initial");

  const std::size_t n = env.state_names.size();
  env.labels.assign(n, {});
  if (doc.contains("labels")) {
    const json& labels = doc["labels"];
    if (!labels.is_object()) schema("labels", "expected an object");
    for (const auto& [state, props] : labels.items()) {
      auto list = get_string_list(props, "labels." + state);
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      env.labels[resolve(state, "labels")] = std::move(list);
    }
  }

  env.action_names.assign(n, {});
  std::vector<std::vector<std::map<int, double>>> mass(n);
  const json& transitions = field(doc, "transitions");
  if (!transitions.is_array()) schema("transitions", "expected an array");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const json& t = transitions[i];
    const std::string where = "transitions[" + std::to_string(i) + "]";
    if (!t.is_object()) schema(where, "expected an object");
    const int from = resolve(get_string(t, "from"), where);
    const int to = resolve(get_string(t, "to"), where);
    const std::string action = get_string(t, "action");
    const double prob = get_number(t, "prob");
    if (!(prob >= 0.0 && prob <= 1.0)) invalid(where + " probability outside [0, 1]");
    auto& names = env.action_names[from];
    auto it = std::find(names.begin(), names.end(), action);
    const auto a = static_cast<std::size_t>(it - names.begin());
    if (it == names.end()) {
      names.push_back(action);
      mass[from].emplace_back();
    }
    if (mass[from][a].count(to)) invalid(where + " duplicates an earlier transition");
    mass[from][a][to] = prob;
  }
  env.transitions.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (auto& m : mass[s]) env.transitions[s].push_back(normalize(std::move(m)));
  }
  validate(env);
  return env;
}

GridSpec grid_from_json(const json& doc) {
  GridSpec g;
  g.width = get_int(doc, "width");
  g.height = get_int(doc, "height");
  g.slip = get_number(doc, "slip");
  const json& start = field(doc, "start");
  if (!start.is_array() || start.size() != 2 || !start[0].is_number_integer() ||
      !start[1].is_number_integer()) {
    schema("start", "expected [x, y] integers");
  }
  g.start = {start[0].get<int>(), start[1].get<int>()};
  if (doc.contains("cells")) {
    const json& cells = doc["cells"];
    if (!cells.is_array()) schema("cells", "expected an array");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const json& c = cells[i];
      const std::string where = "cells[" + std::to_string(i) + "]";
      if (!c.is_object()) schema(where, "expected an object");
      const Cell cell{get_int(c, "x"), get_int(c, "y")};
      auto labels = c.contains("labels") ? get_string_list(c["labels"], where + ".labels")
                                         : std::vector<std::string>{};
      auto& slot = g.cells[cell];
      slot.insert(slot.end(), labels.begin(), labels.end());
      std::sort(slot.begin(), slot.end());
      slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
    }
  }
  return g;
}

}  // namespace

LabeledMdp env_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchema, std::string("malformed JSON: ") + e.what());
  }
  const std::string type = get_string(doc, "type");
  if (type == "mdp") return generic_from_json(doc);
  if (type == "grid") {
    LabeledMdp env = grid_to_mdp(grid_from_json(doc));
    validate(env);
    return env;
  }
  schema("type", "expected \"mdp\" or \"grid\", got \"" + type + "\"");
}

LabeledMdp load_env(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "failed reading '" + path + "'");
  return env_from_json_text(buf.str());
}

}  // namespace gltl
