#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logex/formula.hpp"

namespace logex {

/// Metavariable assignments produced by matching.
struct Bindings {
  std::map<std::string, Formula> single;
  std::map<std::string, std::vector<Formula>> lists;

  friend bool operator==(const Bindings&, const Bindings&) = default;
};

/// Schematic formula over metavariables.
///
/// An And/Or pattern with m >= 2 operand patterns matches an n-ary node of
/// the same connective with k >= m operands by splitting the operand list
/// into m contiguous non-empty groups; a group of two or more operands is
/// read as one conjunction (disjunction). This is what makes rules apply
/// modulo associativity without ever reordering operands.
///
/// `each(list, elem, body)` is the only operand of an And/Or pattern and
/// stands for all operands of the node, each matching `body` with `elem`
/// bound to that operand's part. It expresses the n-ary generalizations:
/// `~(/\ xs) <=> \/ each(xs, e, ~e)`.
class Pattern {
 public:
  enum class Kind { Meta, True, False, Not, And, Or, Implies, Iff, Each };

  static Pattern meta(std::string name);
  static Pattern top();
  static Pattern bottom();
  static Pattern negation(Pattern child);
  static Pattern conj(std::vector<Pattern> ops);
  static Pattern disj(std::vector<Pattern> ops);
  static Pattern implication(Pattern lhs, Pattern rhs);
  static Pattern biconditional(Pattern lhs, Pattern rhs);
  static Pattern each(std::string list, std::string element, Pattern body);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::string& element() const { return element_; }
  const std::vector<Pattern>& children() const { return children_; }

  /// Metavariable names (single and list) occurring in the pattern.
  std::set<std::string> metas() const;

  /// Pattern text in the concrete formula syntax, lists written `xs...`.
  std::string text() const;

 private:
  Kind kind_ = Kind::Meta;
  std::string name_;
  std::string element_;
  std::vector<Pattern> children_;
};

/// All ways `p` matches `f` extending `seed`, in split order (shorter
/// leading groups first).
std::vector<Bindings> match(const Pattern& p, const Formula& f, const Bindings& seed = {});

/// Cheap necessary condition for `match(p, subformula_at(f, pos))` to be
/// non-empty: compares connectives of the root and of the outer operands
/// without building the span. True for invalid positions.
bool may_match_at(const Pattern& p, const Formula& f, const Position& pos);

/// Spans of the n-ary `node` on which `p` may match, a superset of the true
/// matches; Span{0, arity} stands for the node itself. Found from the
/// operands directly, so a node of k operands costs O(k) for the usual
/// two-operand patterns instead of one match per span.
std::vector<Span> candidate_spans(const Pattern& p, const Formula& node);

class UnboundMeta : public std::invalid_argument {
 public:
  explicit UnboundMeta(const std::string& name)
      : std::invalid_argument("metavariable '" + name + "' is unbound") {}
};

Formula instantiate(const Pattern& p, const Bindings& b);

}  // namespace logex
