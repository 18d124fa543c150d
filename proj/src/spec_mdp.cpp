#include "gltl/spec_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gltl/error.hpp"

namespace gltl {

double total_mass(const Distribution& d) {
  double s = 0.0;
  for (const auto& o : d) s += o.prob;
  return s;
}

SpecMdp::SpecMdp(std::vector<std::string> atoms, std::vector<std::string> names, int accept,
                 int reject, std::vector<std::vector<Distribution>> delta)
    : atoms_(std::move(atoms)),
      names_(std::move(names)),
      accept_(accept),
      reject_(reject),
      delta_(std::move(delta)) {
  if (atoms_.size() > kMaxAtoms) {
    throw Error(ErrorCode::kInvalidArgument,
                "too many atomic propositions (" + std::to_string(atoms_.size()) + ", limit " +
                    std::to_string(kMaxAtoms) + ")");
  }
  if (names_.size() < 3 || delta_.size() != names_.size() || accept_ == reject_ ||
      accept_ == 0 || reject_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "malformed specification automaton");
  }
  for (const auto& row : delta_) {
    if (row.size() != num_valuations()) {
      throw Error(ErrorCode::kInvalidArgument, "transition table does not cover every valuation");
    }
  }
}

Valuation SpecMdp::valuation_of(const std::vector<std::string>& true_props) const {
  Valuation v;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (std::find(true_props.begin(), true_props.end(), atoms_[i]) != true_props.end()) {
      v.bits |= 1U << i;
    }
  }
  return v;
}

std::size_t SpecMdp::num_transitions() const {
  std::size_t n = 0;
  for (std::size_t q = 0; q < delta_.size(); ++q) {
    if (is_terminal(static_cast<int>(q))) continue;
    for (const auto& d : delta_[q]) n += d.size();
  }
  return n;
}

namespace {

// Construction-time state of a derived automaton: a pair of sub-automaton
// states (unary constructions leave b at -1).
struct Key {
  int a = -1;
  int b = -1;
  auto operator<=>(const Key&) const = default;
};

enum class Kind { kAccept, kReject, kLive };

struct Successor {
  Kind kind;
  Key key;
  double prob;
};

std::vector<std::string> merge_atoms(const std::vector<std::string>& x,
                                     const std::vector<std::string>& y) {
  std::vector<std::string> out;
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  if (out.size() > SpecMdp::kMaxAtoms) {
    throw Error(ErrorCode::kInvalidArgument, "too many atomic propositions in formula");
  }
  return out;
}

// Maps a valuation over `full` to one over `sub` (sub must be a subset).
class Projection {
 public:
  Projection(const std::vector<std::string>& full, const std::vector<std::string>& sub) {
    for (const auto& a : sub) {
      positions_.push_back(static_cast<unsigned>(
          std::find(full.begin(), full.end(), a) - full.begin()));
    }
  }

  Valuation operator()(Valuation v) const {
    Valuation out;
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      if (v.holds(positions_[i])) out.bits |= 1U << i;
    }
    return out;
  }

 private:
  std::vector<unsigned> positions_;
};

// Breadth-first materialization from `init`. Ids: 0 = init, 1 = accept,
// 2 = reject, then live states in discovery order; successors are visited in
// valuation order and then in the order `expand` emits them.
template <class Expand, class NameOf>
SpecMdp explore(std::vector<std::string> atoms, Key init, Expand expand, NameOf name_of) {
  const std::size_t nv = std::size_t{1} << atoms.size();
  std::map<Key, int> ids{{init, 0}};
  std::vector<Key> keys{init, Key{}, Key{}};
  std::vector<std::string> names{name_of(init), "acc", "rej"};
  std::vector<std::vector<Distribution>> delta(3);

  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i == 1 || i == 2) continue;
    std::vector<Distribution> row(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      std::map<int, double> mass;
      for (const Successor& s : expand(keys[i], Valuation{static_cast<std::uint32_t>(v)})) {
        int id = 0;
        if (s.kind == Kind::kAccept) {
          id = 1;
        } else if (s.kind == Kind::kReject) {
          id = 2;
        } else {
          auto [it, inserted] = ids.try_emplace(s.key, static_cast<int>(keys.size()));
          if (inserted) {
            keys.push_back(s.key);
            names.push_back(name_of(s.key));
          }
          id = it->second;
        }
        mass[id] += s.prob;
      }
      for (const auto& [target, p] : mass) {
        if (p > 0.0) row[v].push_back({target, p});
      }
    }
    if (delta.size() < keys.size()) delta.resize(keys.size());
    delta[i] = std::move(row);
  }
  delta.resize(keys.size());
  for (int t : {1, 2}) delta[t].assign(nv, Distribution{{t, 1.0}});
  return SpecMdp(std::move(atoms), std::move(names), 1, 2, std::move(delta));
}

}  // namespace

SpecMdp build_atomic(const std::string& atom) {
  if (!is_valid_atom_name(atom)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid atom name '" + atom + "'");
  }
  // valuation 0: atom false, valuation 1: atom true
  std::vector<std::vector<Distribution>> delta{
      {{{2, 1.0}}, {{1, 1.0}}},
      {{{1, 1.0}}, {{1, 1.0}}},
      {{{2, 1.0}}, {{2, 1.0}}},
  };
  return SpecMdp({atom}, {atom, "acc", "rej"}, 1, 2, std::move(delta));
}

SpecMdp build_literal(bool value) {
  const int target = value ? 1 : 2;
  std::vector<std::vector<Distribution>> delta{
      {{{target, 1.0}}},
      {{{1, 1.0}}},
      {{{2, 1.0}}},
  };
  return SpecMdp({}, {value ? "true" : "false", "acc", "rej"}, 1, 2, std::move(delta));
}

SpecMdp negate(const SpecMdp& m) {
  std::vector<std::string> names;
  std::vector<std::vector<Distribution>> delta;
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    const int id = static_cast<int>(q);
    names.push_back(id == m.accept() ? "rej" : id == m.reject() ? "acc" : m.state_name(id));
    std::vector<Distribution> row;
    for (std::size_t v = 0; v < m.num_valuations(); ++v) {
      row.push_back(m.next(id, Valuation{static_cast<std::uint32_t>(v)}));
    }
    delta.push_back(std::move(row));
  }
  return SpecMdp(m.atoms(), std::move(names), m.reject(), m.accept(), std::move(delta));
}

SpecMdp conjoin(const SpecMdp& m1, const SpecMdp& m2) {
  auto atoms = merge_atoms(m1.atoms(), m2.atoms());
  const Projection p1(atoms, m1.atoms());
  const Projection p2(atoms, m2.atoms());
  auto expand = [&](Key k, Valuation v) {
    std::vector<Successor> out;
    for (const auto& o1 : m1.next(k.a, p1(v))) {
      for (const auto& o2 : m2.next(k.b, p2(v))) {
        const double p = o1.prob * o2.prob;
        if (o1.target == m1.reject() || o2.target == m2.reject()) {
          out.push_back({Kind::kReject, {}, p});
        } else if (o1.target == m1.accept() && o2.target == m2.accept()) {
          out.push_back({Kind::kAccept, {}, p});
        } else {
          out.push_back({Kind::kLive, {o1.target, o2.target}, p});
        }
      }
    }
    return out;
  };
  auto name_of = [&](Key k) {
    return "&(" + m1.state_name(k.a) + "," + m2.state_name(k.b) + ")";
  };
  return explore(std::move(atoms), Key{m1.initial(), m2.initial()}, expand, name_of);
}

SpecMdp disjoin(const SpecMdp& m1, const SpecMdp& m2) {
  return negate(conjoin(negate(m1), negate(m2)));
}

// mu is the per-step probability that the window survives.
SpecMdp until(double mu, const SpecMdp& m1, const SpecMdp& m2) {
  auto atoms = merge_atoms(m1.atoms(), m2.atoms());
  const Projection p1(atoms, m1.atoms());
  const Projection p2(atoms, m2.atoms());
  const int ini1 = m1.initial();
  const int ini2 = m2.initial();
  auto expand = [&](Key k, Valuation v) {
    std::vector<Successor> out;
    for (const auto& o1 : m1.next(k.a, p1(v))) {
      for (const auto& o2 : m2.next(k.b, p2(v))) {
        const double p = o1.prob * o2.prob;
        const int t1 = o1.target;
        const int t2 = o2.target;
        if (t2 == m2.accept()) {
          out.push_back({Kind::kAccept, {}, p});
          continue;
        }
        if (t1 == m1.reject()) {
          out.push_back({Kind::kReject, {}, p});
          continue;
        }
        // Both sides restart when finished; the window must survive the step.
        const int next1 = t1 == m1.accept() ? ini1 : t1;
        const int next2 = t2 == m2.reject() ? ini2 : t2;
        out.push_back({Kind::kLive, {next1, next2}, p * mu});
        out.push_back({Kind::kReject, {}, p * (1.0 - mu)});
      }
    }
    return out;
  };
  auto name_of = [&](Key k) {
    return "U(" + m1.state_name(k.a) + "," + m2.state_name(k.b) + ")";
  };
  return explore(std::move(atoms), Key{ini1, ini2}, expand, name_of);
}

SpecMdp eventually(double mu, const SpecMdp& m2) {
  const Projection proj(m2.atoms(), m2.atoms());
  auto expand = [&](Key k, Valuation v) {
    std::vector<Successor> out;
    for (const auto& o : m2.next(k.a, proj(v))) {
      if (o.target == m2.accept()) {
        out.push_back({Kind::kAccept, {}, o.prob});
        continue;
      }
      const int next = o.target == m2.reject() ? m2.initial() : o.target;
      out.push_back({Kind::kLive, {next, -1}, o.prob * mu});
      out.push_back({Kind::kReject, {}, o.prob * (1.0 - mu)});
    }
    return out;
  };
  auto name_of = [&](Key k) { return "F(" + m2.state_name(k.a) + ")"; };
  return explore(m2.atoms(), Key{m2.initial(), -1}, expand, name_of);
}

SpecMdp always(double mu, const SpecMdp& m2) {
  const Projection proj(m2.atoms(), m2.atoms());
  auto expand = [&](Key k, Valuation v) {
    std::vector<Successor> out;
    for (const auto& o : m2.next(k.a, proj(v))) {
      if (o.target == m2.reject()) {
        out.push_back({Kind::kReject, {}, o.prob});
        continue;
      }
      const int next = o.target == m2.accept() ? m2.initial() : o.target;
      out.push_back({Kind::kLive, {next, -1}, o.prob * mu});
      out.push_back({Kind::kAccept, {}, o.prob * (1.0 - mu)});
    }
    return out;
  };
  auto name_of = [&](Key k) { return "G(" + m2.state_name(k.a) + ")"; };
  return explore(m2.atoms(), Key{m2.initial(), -1}, expand, name_of);
}

SpecMdp compile(const Formula& f) {
  switch (f.op()) {
    case Op::kAtom: return build_atomic(f.name());
    case Op::kTrue: return build_literal(true);
    case Op::kFalse: return build_literal(false);
    case Op::kNot: return negate(compile(f.child()));
    case Op::kAnd: return conjoin(compile(f.left()), compile(f.right()));
    case Op::kOr: return disjoin(compile(f.left()), compile(f.right()));
    case Op::kUntil: return until(f.mu(), compile(f.left()), compile(f.right()));
    case Op::kEventually: return eventually(f.mu(), compile(f.child()));
    case Op::kAlways: return always(f.mu(), compile(f.child()));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown formula node");
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace {

struct Matching {
  std::vector<int> fwd;
  std::vector<int> bwd;
  std::vector<int> order;
  std::size_t cursor = 0;

  void bind(int qa, int qb) {
    fwd[qa] = qb;
    bwd[qb] = qa;
    order.push_back(qa);
  }
};

bool search(const SpecMdp& a, const SpecMdp& b, double tol, Matching m) {
  for (; m.cursor < m.order.size(); ++m.cursor) {
    const int qa = m.order[m.cursor];
    const int qb = m.fwd[qa];
    if (a.is_terminal(qa)) continue;
    for (std::size_t v = 0; v < a.num_valuations(); ++v) {
      const Valuation val{static_cast<std::uint32_t>(v)};
      const Distribution& da = a.next(qa, val);
      const Distribution& db = b.next(qb, val);
      if (da.size() != db.size()) return false;

      std::vector<const Outcome*> free_b;
      for (const auto& o : db) {
        if (m.bwd[o.target] < 0) free_b.push_back(&o);
      }
      std::size_t free_a = 0;
      for (const auto& o : da) {
        const int image = m.fwd[o.target];
        if (image < 0) {
          ++free_a;
          continue;
        }
        auto it = std::find_if(db.begin(), db.end(), [&](const Outcome& x) { return x.target == image; });
        if (it == db.end() || std::abs(it->prob - o.prob) > tol) return false;
      }
      if (free_a != free_b.size()) return false;

      for (const auto& o : da) {
        if (m.fwd[o.target] >= 0) continue;
        std::vector<const Outcome*> candidates;
        for (const Outcome* c : free_b) {
          if (m.bwd[c->target] < 0 && std::abs(c->prob - o.prob) <= tol &&
              !b.is_terminal(c->target)) {
            candidates.push_back(c);
          }
        }
        if (candidates.empty()) return false;
        if (candidates.size() == 1) {
          m.bind(o.target, candidates.front()->target);
          continue;
        }
        // Ambiguous: try each candidate, resuming from the same state.
        for (const Outcome* c : candidates) {
          Matching branch = m;
          branch.bind(o.target, c->target);
          if (search(a, b, tol, std::move(branch))) return true;
        }
        return false;
      }
    }
  }
  return std::all_of(m.fwd.begin(), m.fwd.end(), [](int x) { return x >= 0; });
}

}  // namespace

bool spec_isomorphic(const SpecMdp& a, const SpecMdp& b, double tol) {
  if (a.atoms() != b.atoms() || a.num_states() != b.num_states()) return false;
  Matching m;
  m.fwd.assign(a.num_states(), -1);
  m.bwd.assign(b.num_states(), -1);
  m.bind(a.initial(), b.initial());
  m.bind(a.accept(), b.accept());
  m.bind(a.reject(), b.reject());
  return search(a, b, tol, std::move(m));
}

double max_distribution_error(const SpecMdp& m) {
  double worst = 0.0;
  for (std::size_t q = 0; q < m.num_states(); ++q) {
    for (std::size_t v = 0; v < m.num_valuations(); ++v) {
      const auto& d = m.next(static_cast<int>(q), Valuation{static_cast<std::uint32_t>(v)});
      for (const auto& o : d) {
        if (o.prob < 0.0 || o.prob > 1.0) return 1.0;
      }
      worst = std::max(worst, std::abs(total_mass(d) - 1.0));
    }
  }
  return worst;
}

bool is_absorbing(const SpecMdp& m) {
  // Greatest set of non-terminal states in which some valuation keeps every
  // successor inside the set. It is empty iff absorption is guaranteed.
  std::vector<bool> inside(m.num_states());
  for (std::size_t q = 0; q < m.num_states(); ++q) inside[q] = !m.is_terminal(static_cast<int>(q));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t q = 0; q < m.num_states(); ++q) {
      if (!inside[q]) continue;
      bool trapped = false;
      for (std::size_t v = 0; v < m.num_valuations() && !trapped; ++v) {
        const auto& d = m.next(static_cast<int>(q), Valuation{static_cast<std::uint32_t>(v)});
        trapped = std::all_of(d.begin(), d.end(), [&](const Outcome& o) { return inside[o.target]; });
      }
      if (!trapped) {
        inside[q] = false;
        changed = true;
      }
    }
  }
  return std::none_of(inside.begin(), inside.end(), [](bool x) { return x; });
}

}  // namespace gltl
