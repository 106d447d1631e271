#include "logex/recognizer.hpp"

#include <algorithm>

#include "logex/semantics.hpp"

namespace logex {

std::string_view to_string(Mode m) { return m == Mode::Strict ? "strict" : "lenient"; }

std::string_view to_string(ChainDirection d) {
  return d == ChainDirection::Forward ? "forward" : "backward";
}

std::optional<ChainDirection> parse_direction(std::string_view text) {
  if (text == "forward") return ChainDirection::Forward;
  if (text == "backward") return ChainDirection::Backward;
  return std::nullopt;
}

std::string_view to_string(DiagnosisKind k) {
  switch (k) {
    case DiagnosisKind::SyntaxError: return "syntax-error";
    case DiagnosisKind::NoOp: return "noop";
    case DiagnosisKind::Correct: return "correct";
    case DiagnosisKind::WrongRuleName: return "wrong-rule-name";
    case DiagnosisKind::Buggy: return "buggy";
    case DiagnosisKind::BuggyButEquivalent: return "buggy-but-equivalent";
    case DiagnosisKind::NotEquivalent: return "not-equivalent";
    case DiagnosisKind::EquivalentUnrecognized: return "equivalent-unrecognized";
  }
  return "";
}

std::string_view to_string(AdvisoryKind k) {
  switch (k) {
    case AdvisoryKind::AbsorptionAvailable: return "absorption-available";
    case AdvisoryKind::SolutionLongerThanWorked: return "solution-longer-than-worked";
    case AdvisoryKind::DivergedFromStrategy: return "diverged-from-strategy";
  }
  return "";
}

std::string Diagnosis::rule_id() const {
  if (application) return application->rule_id;
  if (!detected_rule.empty()) return detected_rule;
  return buggy_rule;
}

namespace {

std::optional<Formula> try_instantiate(const Pattern& p, const Bindings& b) {
  try {
    return instantiate(p, b);
  } catch (const UnboundMeta&) {
    return std::nullopt;
  }
}

std::string display_name(const std::string& rule_id) {
  const Rule* r = find_rule(rule_id);
  return r ? r->name + " (" + rule_id + ")" : rule_id;
}

std::string describe_counterexample(const Valuation& v) {
  std::string out;
  for (const auto& [atom, value] : v) {
    if (!out.empty()) out += ", ";
    out += atom + " = " + (value ? "T" : "F");
  }
  return out;
}

}  // namespace

std::vector<RuleApplication> recognize(const Formula& before, const Formula& after) {
  std::vector<RuleApplication> out;
  if (before == after) return out;
  for (const auto& pos : positions(before)) {
    auto replacement = extract_replacement(before, pos, after);
    if (!replacement) continue;
    Formula sub = subformula_at(before, pos);
    if (sub == *replacement) continue;
    for (const auto& rule : standard_rules()) {
      for (const auto& var : rule.variants) {
        for (Orientation o : {Orientation::LeftToRight, Orientation::RightToLeft}) {
          if (o == Orientation::RightToLeft && !rule.bidirectional) continue;
          const Pattern& from = o == Orientation::LeftToRight ? var.lhs : var.rhs;
          const Pattern& to = o == Orientation::LeftToRight ? var.rhs : var.lhs;
          bool found = false;
          for (const auto& b : match(from, sub)) {
            for (const auto& b2 : match(to, *replacement, b)) {
              auto produced = try_instantiate(to, b2);
              if (produced && *produced == *replacement) {
                out.push_back({rule.id, var.id, pos, o, before, after});
                found = true;
                break;
              }
            }
            if (found) break;
          }
        }
      }
    }
  }
  return out;
}

std::optional<Position> absorption_position(const Formula& f) {
  static const std::vector<const Rule*> kAbsorption = {find_rule("absorption-or"),
                                                       find_rule("absorption-and")};
  for (const auto& pos : positions(f)) {
    for (const Rule* rule : kAbsorption) {
      for (const auto& var : rule->variants) {
        if (!apply_all(*rule, var, Orientation::LeftToRight, f, pos).empty()) return pos;
      }
    }
  }
  return std::nullopt;
}

std::vector<Advisory> advisories_for(const Formula& after, const StepContext& context) {
  std::vector<Advisory> out;
  bool step_was_absorption =
      context.step_rule && context.step_rule->starts_with("absorption");
  if (!step_was_absorption) {
    if (auto pos = absorption_position(after)) {
      out.push_back({AdvisoryKind::AbsorptionAvailable,
                     "This formula can be simplified with absorption.", pos});
    }
  }
  if (context.worked_length && context.accepted_steps > *context.worked_length) {
    out.push_back({AdvisoryKind::SolutionLongerThanWorked,
                   "Your solution is getting longer than the worked-out solution (" +
                       std::to_string(*context.worked_length) + " steps).",
                   std::nullopt});
  }
  if (context.on_path && !*context.on_path) {
    out.push_back({AdvisoryKind::DivergedFromStrategy,
                   "This step leaves the standard solution strategy; ask for a hint to see a "
                   "more direct route.",
                   std::nullopt});
  }
  return out;
}

Diagnosis diagnose(const StepSubmission& sub, const DiagnoseOptions& options) {
  Diagnosis d;
  auto parsed = try_parse(sub.after_text);
  if (auto* err = std::get_if<SyntaxError>(&parsed)) {
    d.kind = DiagnosisKind::SyntaxError;
    d.accepted = false;
    d.syntax = *err;
    d.message = err->message();
    return d;
  }
  const Formula after = std::get<Formula>(std::move(parsed));
  const Formula& before = sub.before;
  d.after = after;

  if (before == after) {
    d.kind = DiagnosisKind::NoOp;
    d.accepted = true;
    d.message = "The formula is unchanged; only parentheses or spacing differ.";
    return d;
  }

  auto apps = recognize(before, after);
  if (!apps.empty()) {
    const RuleApplication* chosen = nullptr;
    if (sub.claimed_rule) {
      auto it = std::find_if(apps.begin(), apps.end(), [&](const RuleApplication& a) {
        return a.rule_id == *sub.claimed_rule;
      });
      if (it != apps.end()) chosen = &*it;
    } else if (sub.mode == Mode::Lenient) {
      chosen = &apps.front();
    }
    if (chosen) {
      d.kind = DiagnosisKind::Correct;
      d.accepted = true;
      d.application = *chosen;
      d.position = chosen->position;
      d.message = "Correct application of " + display_name(chosen->rule_id) + ".";
      if (options.absorption_advisory) {
        auto adv = advisories_for(after, StepContext{chosen->rule_id, 0, std::nullopt, std::nullopt});
        d.advisories = std::move(adv);
      }
      return d;
    }
    d.kind = DiagnosisKind::WrongRuleName;
    d.accepted = false;
    d.detected_rule = apps.front().rule_id;
    d.position = apps.front().position;
    if (sub.claimed_rule) {
      d.claimed_rule = *sub.claimed_rule;
      std::string claimed = find_rule(*sub.claimed_rule) ? display_name(*sub.claimed_rule)
                                                         : "'" + *sub.claimed_rule + "' (unknown rule)";
      d.message = "The step is correct, but it applies " + display_name(d.detected_rule) +
                  ", not " + claimed + ".";
    } else {
      d.message = "Motivate this step with a rule name: it applies " +
                  display_name(d.detected_rule) + ".";
    }
    return d;
  }

  const bool equiv = equivalent(before, after);
  auto bugs = match_buggy(before, after);
  if (!equiv) {
    d.accepted = false;
    if (!bugs.empty()) {
      d.kind = DiagnosisKind::Buggy;
      d.buggy_rule = bugs.front().rule->id;
      d.position = bugs.front().position;
      d.message = bugs.front().message();
    } else {
      d.kind = DiagnosisKind::NotEquivalent;
      d.message = "The new formula is not equivalent to the previous one";
      if (auto cex = counterexample(before, after)) {
        d.message += " (they differ when " + describe_counterexample(*cex) + ")";
      }
      d.message += ".";
    }
    return d;
  }

  if (!bugs.empty() && options.equivalent_buggy_feedback) {
    d.kind = DiagnosisKind::BuggyButEquivalent;
    d.accepted = false;
    d.buggy_rule = bugs.front().rule->id;
    d.position = bugs.front().position;
    d.message = bugs.front().message() +
                " The result happens to be equivalent, but the step is not a correct rule "
                "application.";
    return d;
  }

  d.kind = DiagnosisKind::EquivalentUnrecognized;
  if (sub.mode == Mode::Strict) {
    d.accepted = false;
    d.message =
        "The new formula is equivalent, but the step is not a single rule application; split it "
        "into separate steps.";
  } else {
    d.accepted = true;
    d.message =
        "Equivalent, but this step is not a single rule application; it combines several "
        "rules.";
  }
  return d;
}

}  // namespace logex
