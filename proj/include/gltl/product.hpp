#pragma once

#include <string>
#include <vector>

#include "gltl/distribution.hpp"
#include "gltl/env_model.hpp"
#include "gltl/spec_mdp.hpp"

namespace gltl {

struct ProductState {
  int env = -1;   // -1 for the two sinks
  int spec = -1;  // spec accept/reject id for the sinks
};

/// Environment x specification automaton. Every product state whose spec
/// component is accept (reject) is merged into one absorbing sink; entering
/// the accept sink is worth +1. Only states reachable from the initial
/// distribution are materialized.
class ProductMdp {
 public:
  static constexpr int kAcceptSink = 0;
  static constexpr int kRejectSink = 1;

  ProductMdp(LabeledMdp env, SpecMdp spec);

  const LabeledMdp& env() const { return env_; }
  const SpecMdp& spec() const { return spec_; }

  std::size_t num_states() const { return states_.size(); }
  const ProductState& state(int x) const { return states_.at(x); }
  bool is_sink(int x) const { return x == kAcceptSink || x == kRejectSink; }
  bool is_accepting(int x) const { return x == kAcceptSink; }
  bool is_rejecting(int x) const { return x == kRejectSink; }

  std::size_t num_actions(int x) const { return transitions_.at(x).size(); }
  const Distribution& next(int x, int action) const { return transitions_.at(x).at(action); }
  /// Name of action `a` at product state x ("stay" for sinks).
  const std::string& action_name(int x, int a) const;

  /// Distribution over product states after the spec consumes the label of
  /// the environment's initial state.
  const Distribution& initial() const { return initial_; }

  /// Product state index of a live pair, -1 if it was never reached or the
  /// spec component is terminal.
  int index_of(int env_state, int spec_state) const;

  /// Mass that one step from spec state q moves to, given env state s' is entered.
  const Distribution& spec_step(int q, int env_state) const;

  /// Human-readable name: "(envname,q<id>)" or "accept"/"reject".
  std::string state_name(int x) const;

  /// Spec atoms that never appear in any environment label.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  LabeledMdp env_;
  SpecMdp spec_;
  std::vector<Valuation> env_valuation_;
  std::vector<ProductState> states_;
  std::vector<std::vector<Distribution>> transitions_;
  std::vector<int> index_;
  Distribution initial_;
  std::vector<std::string> warnings_;
};

ProductMdp compose(LabeledMdp env, SpecMdp spec);

struct ProductStats {
  std::size_t states = 0;  // live states plus the two sinks
  std::size_t live_states = 0;
  std::size_t accepting_sinks = 0;
  std::size_t rejecting_sinks = 0;
  std::size_t actions = 0;      // (state, action) pairs over live states
  std::size_t transitions = 0;  // nonzero outcomes over live states
};

ProductStats product_stats(const ProductMdp& p);

}  // namespace gltl
