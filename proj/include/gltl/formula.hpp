#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gltl {

enum class Op { kAtom, kTrue, kFalse, kNot, kAnd, kOr, kUntil, kEventually, kAlways };

/// Immutable GLTL syntax tree. Copies share structure.
///
/// Temporal nodes carry a window survival probability mu in (0, 1); the
/// factory functions reject anything else, so every Formula in existence is
/// valid.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula truth();
  static Formula falsity();
  static Formula negation(Formula child);
  static Formula conjunction(Formula left, Formula right);
  static Formula disjunction(Formula left, Formula right);
  static Formula until(double mu, Formula left, Formula right);
  static Formula eventually(double mu, Formula child);
  static Formula always(double mu, Formula child);

  Op op() const;
  // Atom name; empty for every other node.
  const std::string& name() const;
  // Window parameter; 0 for non-temporal nodes.
  double mu() const;
  // Unary nodes expose their operand as child(); binary nodes as left()/right().
  const Formula& child() const { return left(); }
  const Formula& left() const;
  const Formula& right() const;

  bool is_temporal() const;
  std::size_t depth() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

bool is_valid_atom_name(std::string_view name);

/// Parses concrete syntax:
///   or   := and ('|' or)?
///   and  := temp ('&' and)?
///   temp := ('F'|'G') window temp | neg ('U' window temp)?
///   neg  := '!' neg | primary
///   primary := ident | 'true' | 'false' | '(' or ')'
///   window  := '{' number '}'
/// A missing window takes default_mu; without one, MissingMu is raised.
Formula parse(std::string_view text, std::optional<double> default_mu = std::nullopt);

/// Fully parenthesized text that parses back to the same tree.
std::string format(const Formula& f);

/// Nested S-expression dump, e.g. (until 0.5 (atom a) (atom b)).
std::string to_sexpr(const Formula& f);

/// Sorted, deduplicated atom names.
std::vector<std::string> atomic_props(const Formula& f);

/// Shortest decimal text that round-trips to the same double.
std::string format_mu(double mu);

}  // namespace gltl
