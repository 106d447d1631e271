#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logex/formula.hpp"
#include "logex/rules.hpp"
#include "logex/syntax.hpp"

namespace logex {

/// Proofs require a rule name for every step; normal-form exercises do not.
enum class Mode { Strict, Lenient };

/// Which chain of an equivalence proof a step extends. Normal-form
/// derivations only use Forward.
enum class ChainDirection { Forward, Backward };

std::string_view to_string(Mode m);
std::string_view to_string(ChainDirection d);
std::optional<ChainDirection> parse_direction(std::string_view text);

struct StepSubmission {
  Formula before;
  std::string after_text;
  std::optional<std::string> claimed_rule;
  Mode mode = Mode::Lenient;
  ChainDirection direction = ChainDirection::Forward;
};

enum class DiagnosisKind {
  SyntaxError,
  NoOp,
  Correct,
  WrongRuleName,
  Buggy,
  BuggyButEquivalent,
  NotEquivalent,
  EquivalentUnrecognized,
};

std::string_view to_string(DiagnosisKind k);

enum class AdvisoryKind { AbsorptionAvailable, SolutionLongerThanWorked, DivergedFromStrategy };

std::string_view to_string(AdvisoryKind k);

struct Advisory {
  AdvisoryKind kind;
  std::string message;
  std::optional<Position> position;
};

struct Diagnosis {
  DiagnosisKind kind = DiagnosisKind::NotEquivalent;
  bool accepted = false;
  std::string message;
  /// The parsed new formula (absent only for syntax errors).
  std::optional<Formula> after;
  std::optional<SyntaxError> syntax;
  /// Correct: the recognized application.
  std::optional<RuleApplication> application;
  /// WrongRuleName: what the step actually applies.
  std::string detected_rule;
  std::string claimed_rule;
  /// Buggy / BuggyButEquivalent.
  std::string buggy_rule;
  std::optional<Position> position;
  std::vector<Advisory> advisories;

  /// Rule id reported to clients: the applied, detected or buggy rule.
  std::string rule_id() const;
};

struct DiagnoseOptions {
  /// Point out an available absorption after a correct non-absorption step.
  bool absorption_advisory = true;
  /// Report the matching buggy rule even when the result is equivalent.
  bool equivalent_buggy_feedback = true;
};

/// Every single rule application turning `before` into `after`, outermost
/// position first, then catalog order, variant order, left-to-right first.
std::vector<RuleApplication> recognize(const Formula& before, const Formula& after);

/// Syntax, no-op, rule recognition, rule-name check, semantic check, buggy
/// rules: in that order.
Diagnosis diagnose(const StepSubmission& sub, const DiagnoseOptions& options = {});

/// What is known about the exercise when advising on a step.
struct StepContext {
  /// Rule of the step that produced `after`, if recognized.
  std::optional<std::string> step_rule;
  /// Accepted steps so far, including this one.
  std::size_t accepted_steps = 0;
  /// Length of the worked-out solution from the exercise start.
  std::optional<std::size_t> worked_length;
  /// Whether the student is still on a strategy path.
  std::optional<bool> on_path;
};

std::vector<Advisory> advisories_for(const Formula& after, const StepContext& context);

/// First position where absorption simplifies `f`.
std::optional<Position> absorption_position(const Formula& f);

}  // namespace logex
