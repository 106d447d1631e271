#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace logex {

enum class Connective : std::uint8_t { Atom, True, False, Not, And, Or, Implies, Iff };

/// Immutable propositional formula.
///
/// Conjunctions and disjunctions are n-ary and always flattened: an And never
/// has an And operand and an Or never has an Or operand, so `(p \/ q) \/ r`
/// and `p \/ q \/ r` are the same value. Operand order is significant.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula truth();
  static Formula falsity();
  static Formula negation(Formula child);
  /// Builds a flattened n-ary node. A single operand is returned unchanged.
  static Formula nary(Connective kind, std::vector<Formula> operands);
  static Formula conjunction(std::vector<Formula> operands) {
    return nary(Connective::And, std::move(operands));
  }
  static Formula disjunction(std::vector<Formula> operands) {
    return nary(Connective::Or, std::move(operands));
  }
  static Formula implication(Formula lhs, Formula rhs);
  static Formula biconditional(Formula lhs, Formula rhs);
  /// Rebuilds a node of the same kind with new children.
  static Formula rebuild(Connective kind, std::vector<Formula> children);

  Connective kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  std::span<const Formula> operands() const { return node_->children; }
  const Formula& operand(std::size_t i) const { return node_->children.at(i); }
  std::size_t arity() const { return node_->children.size(); }
  std::size_t hash() const { return node_->hash; }
  /// Number of nodes in the tree.
  std::size_t size() const { return node_->size; }

  bool is(Connective k) const { return kind() == k; }
  bool is_nary() const { return is(Connective::And) || is(Connective::Or); }
  bool is_constant() const { return is(Connective::True) || is(Connective::False); }
  /// An atom or a negated atom.
  bool is_literal() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Connective kind;
    std::string name;
    std::vector<Formula> children;
    std::size_t hash = 0;
    std::size_t size = 1;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Connective kind, std::string name, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

/// Exact AST equality including operand order.
inline bool structurally_equal(const Formula& a, const Formula& b) { return a == b; }

/// Sorted, de-duplicated atom names.
std::vector<std::string> atoms(const Formula& f);

struct Span {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

/// Location of a sub-formula. A span selects a contiguous operand range of
/// the And/Or node reached by `path`, read as one virtual node of that
/// connective.
struct Position {
  std::vector<std::size_t> path;
  std::optional<Span> span;

  static Position root() { return {}; }
  friend bool operator==(const Position&, const Position&) = default;
};

std::string to_string(const Position& pos);

class InvalidPosition : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

Formula subformula_at(const Formula& f, const Position& pos);
/// Replaces the selected sub-formula and re-flattens the result.
Formula replace_at(const Formula& f, const Position& pos, const Formula& g);
bool is_valid(const Formula& f, const Position& pos);

/// Every node position plus every proper contiguous span (length >= 2) of
/// each And/Or node, outermost first. Whole nodes precede their spans, and
/// longer spans precede shorter ones.
std::vector<Position> positions(const Formula& f);

}  // namespace logex

template <>
struct std::hash<logex::Formula> {
  std::size_t operator()(const logex::Formula& f) const noexcept { return f.hash(); }
};
