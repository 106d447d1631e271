#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logex/formula.hpp"
#include "logex/pattern.hpp"

namespace logex {

/// Which side of a rule schema is rewritten into the other.
enum class Orientation { LeftToRight, RightToLeft };

std::string_view to_string(Orientation o);

/// One concrete lhs/rhs pair of a rule. Commutative variants mirror the
/// top-level operands of the base pair; generalized variants rewrite a
/// whole n-ary node in one step.
struct RuleVariant {
  std::string id;  // "base", "mirror", "general", "general-mirror"
  Pattern lhs;
  Pattern rhs;
};

/// A standard equivalence. Every ground instance of lhs <=> rhs is valid.
struct Rule {
  std::string id;    // stable lowercase-hyphen id, e.g. "demorgan-or"
  std::string name;  // display name, e.g. "DeMorgan"
  std::vector<RuleVariant> variants;
  bool bidirectional = true;

  const RuleVariant* variant(std::string_view id) const;
  /// Schema of the base variant, e.g. "~(phi \/ psi) <=> ~phi /\ ~psi".
  std::string schema() const;
};

/// A formalized common mistake: lhs is rewritten to an inequivalent rhs.
struct BuggyRule {
  std::string id;
  std::vector<RuleVariant> variants;
  std::string message;
  /// Instantiation of the base variant on which lhs and rhs differ.
  Bindings witness;

  std::string schema() const;
};

struct RuleApplication {
  std::string rule_id;  // empty for an accepted step no rule explains
  std::string variant_id;
  Position position;
  Orientation orientation = Orientation::LeftToRight;
  Formula before;
  Formula after;
};

/// The fixed catalog, in stable order.
const std::vector<Rule>& standard_rules();
const std::vector<BuggyRule>& buggy_rules();

const Rule* find_rule(std::string_view id);
const BuggyRule* find_buggy_rule(std::string_view id);

/// Every distinct result of rewriting `f` at `pos` with the given variant
/// and orientation. `extra` supplies metavariables that appear only on the
/// produced side (e.g. psi when introducing an absorption).
std::vector<RuleApplication> apply_all(const Rule& rule, const RuleVariant& variant,
                                       Orientation orientation, const Formula& f,
                                       const Position& pos, const Bindings& extra = {});

/// First result of apply_all, or nullopt when the pattern does not match.
std::optional<Formula> apply(const Rule& rule, std::string_view variant_id, Orientation orientation,
                             const Formula& f, const Position& pos, const Bindings& extra = {});

/// Given that `after` differs from `before` only at `pos`, the formula that
/// was put there. Inverse of replace_at.
std::optional<Formula> extract_replacement(const Formula& before, const Position& pos,
                                           const Formula& after);

struct BuggyMatch {
  const BuggyRule* rule = nullptr;
  std::string variant_id;
  Position position;
  Bindings bindings;

  /// The rule's message with {phi}-style placeholders filled in.
  std::string message() const;
};

/// Buggy rules whose application at some position of `before` yields
/// `after`, outermost position first, catalog order within a position.
std::vector<BuggyMatch> match_buggy(const Formula& before, const Formula& after);

/// Machine-readable rule sheet row.
struct RuleSheetEntry {
  std::string id;
  std::string name;
  std::string schema;
  std::vector<std::string> variants;
};

std::vector<RuleSheetEntry> rule_sheet();

}  // namespace logex
