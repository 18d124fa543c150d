#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gltl/distribution.hpp"
#include "gltl/formula.hpp"

namespace gltl {

/// Truth assignment over a SpecMdp's atom list: bit i is the value of atoms()[i].
struct Valuation {
  std::uint32_t bits = 0;

  bool holds(std::size_t atom_index) const { return (bits >> atom_index) & 1U; }
  bool operator==(const Valuation&) const = default;
};

/// Stochastic automaton compiled from a formula. Reads one valuation per step
/// and moves according to a distribution that encodes window expiration.
///
/// Invariants maintained by every constructor below:
///  - state 0 is the initial state and is never terminal;
///  - accept and reject are distinct, absorbing, and always present;
///  - every other state is reachable from the initial state.
class SpecMdp {
 public:
  static constexpr std::size_t kMaxAtoms = 16;

  SpecMdp(std::vector<std::string> atoms, std::vector<std::string> names, int accept,
          int reject, std::vector<std::vector<Distribution>> delta);

  const std::vector<std::string>& atoms() const { return atoms_; }
  std::size_t num_states() const { return names_.size(); }
  std::size_t num_valuations() const { return std::size_t{1} << atoms_.size(); }

  int initial() const { return 0; }
  int accept() const { return accept_; }
  int reject() const { return reject_; }
  bool is_terminal(int q) const { return q == accept_ || q == reject_; }

  const std::string& state_name(int q) const { return names_.at(q); }
  const Distribution& next(int q, Valuation v) const { return delta_.at(q).at(v.bits); }

  /// Valuation of this automaton's atoms given the set of true propositions.
  Valuation valuation_of(const std::vector<std::string>& true_props) const;

  std::size_t num_transitions() const;

 private:
  std::vector<std::string> atoms_;
  std::vector<std::string> names_;
  int accept_;
  int reject_;
  std::vector<std::vector<Distribution>> delta_;
};

SpecMdp build_atomic(const std::string& atom);
SpecMdp build_literal(bool value);
SpecMdp negate(const SpecMdp& m);
SpecMdp conjoin(const SpecMdp& m1, const SpecMdp& m2);
SpecMdp disjoin(const SpecMdp& m1, const SpecMdp& m2);
SpecMdp until(double mu, const SpecMdp& m1, const SpecMdp& m2);
SpecMdp eventually(double mu, const SpecMdp& m2);
SpecMdp always(double mu, const SpecMdp& m2);

SpecMdp compile(const Formula& f);

/// Structural isomorphism preserving initial/accept/reject and every
/// transition probability within tol.
bool spec_isomorphic(const SpecMdp& a, const SpecMdp& b, double tol = 1e-9);

/// Largest deviation of any (state, valuation) distribution mass from 1.
double max_distribution_error(const SpecMdp& m);

/// True iff no set of non-terminal states can be kept forever by any
/// valuation sequence, i.e. every run reaches accept or reject with
/// probability 1.
bool is_absorbing(const SpecMdp& m);

}  // namespace gltl
