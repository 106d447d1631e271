#include <doctest.h>

#include "logex/recognizer.hpp"
#include "logex/syntax.hpp"

using namespace logex;

namespace {

Diagnosis check(std::string_view before, std::string after, std::optional<std::string> rule = std::nullopt,
                Mode mode = Mode::Lenient, DiagnoseOptions options = {}) {
  return diagnose(StepSubmission{parse(before), std::move(after), std::move(rule), mode, ChainDirection::Forward},
                  options);
}

}  // namespace

TEST_SUITE("recognizer") {
  TEST_CASE("DeMorgan keeping the connective is a buggy step") {
    auto d = check("~(p\\/q)\\/(~~p/\\~q)\\/~q", "(~p\\/~q)\\/(~~p/\\~q)\\/~q");
    CHECK(d.kind == DiagnosisKind::Buggy);
    CHECK_FALSE(d.accepted);
    CHECK(d.buggy_rule == "demorgan-keeps-connective-or");
    CHECK(d.message.find("a disjunction is transformed into a conjunction") != std::string::npos);
  }

  TEST_CASE("complement applied to a compound formula is buggy") {
    auto d = check("(p \\/ q) /\\ (~p \\/ ~q)", "F");
    CHECK(d.kind == DiagnosisKind::Buggy);
    CHECK(d.buggy_rule == "complement-of-compound");
  }

  TEST_CASE("generalized DeMorgan is one correct step") {
    auto d = check("~(p /\\ q /\\ r)", "~p \\/ ~q \\/ ~r", "demorgan-and", Mode::Strict);
    CHECK(d.kind == DiagnosisKind::Correct);
    CHECK(d.accepted);
    REQUIRE(d.application);
    CHECK(d.application->variant_id == "general");
  }

  TEST_CASE("mirrored distribution is correct; a reordered result is not one step") {
    auto ok = check("(q \\/ r) /\\ p", "(q /\\ p) \\/ (r /\\ p)", "distr-and-over-or", Mode::Strict);
    CHECK(ok.kind == DiagnosisKind::Correct);
    auto reordered = check("(q \\/ r) /\\ p", "(p /\\ q) \\/ (p /\\ r)", "distr-and-over-or", Mode::Strict);
    CHECK_FALSE(reordered.accepted);
    CHECK(reordered.kind == DiagnosisKind::EquivalentUnrecognized);
  }

  TEST_CASE("removing parentheses is a no-op") {
    auto d = check("q \\/ (~p \\/ q) \\/ p", "q \\/ ~p \\/ q \\/ p");
    CHECK(d.kind == DiagnosisKind::NoOp);
    CHECK(d.accepted);
  }

  TEST_CASE("syntax errors are feedback rather than exceptions") {
    auto d = check("p", "p \\/");
    CHECK(d.kind == DiagnosisKind::SyntaxError);
    REQUIRE(d.syntax);
    CHECK(d.syntax->offset == 2);
    CHECK_FALSE(d.after);
  }

  TEST_CASE("wrong rule name") {
    auto d = check("~~p", "p", "demorgan-or", Mode::Strict);
    CHECK(d.kind == DiagnosisKind::WrongRuleName);
    CHECK(d.detected_rule == "double-negation");
    CHECK(d.claimed_rule == "demorgan-or");
    CHECK(d.message.find("Double negation") != std::string::npos);
  }

  TEST_CASE("strict mode without a rule name asks for one") {
    auto d = check("~~p", "p", std::nullopt, Mode::Strict);
    CHECK(d.kind == DiagnosisKind::WrongRuleName);
    CHECK_FALSE(d.accepted);
    CHECK(d.claimed_rule.empty());
  }

  TEST_CASE("lenient mode accepts a recognized step without a name") {
    auto d = check("~~p", "p");
    CHECK(d.kind == DiagnosisKind::Correct);
    CHECK(d.rule_id() == "double-negation");
  }

  TEST_CASE("not equivalent reports a counterexample") {
    auto d = check("p /\\ q", "p \\/ r");
    CHECK(d.kind == DiagnosisKind::NotEquivalent);
    CHECK(d.message.find("differ when") != std::string::npos);
  }

  TEST_CASE("several rules at once: accepted in lenient and rejected in strict") {
    auto lenient = check("~(p \\/ ~q)", "~p /\\ q");
    CHECK(lenient.kind == DiagnosisKind::EquivalentUnrecognized);
    CHECK(lenient.accepted);
    auto strict = check("~(p \\/ ~q)", "~p /\\ q", "demorgan-or", Mode::Strict);
    CHECK_FALSE(strict.accepted);
  }

  TEST_CASE("equivalent result of a buggy pattern") {
    // p \/ (p /\ q) => p looks like dropping an operand
    auto on = check("p \\/ q \\/ (p /\\ q)", "p \\/ q");
    CHECK(on.kind == DiagnosisKind::BuggyButEquivalent);
    CHECK_FALSE(on.accepted);
    auto off = check("p \\/ q \\/ (p /\\ q)", "p \\/ q", std::nullopt, Mode::Lenient, {true, false});
    CHECK(off.kind == DiagnosisKind::EquivalentUnrecognized);
    CHECK(off.accepted);
  }

  TEST_CASE("recognize lists every explanation outermost first") {
    auto apps = recognize(parse("p /\\ q"), parse("q /\\ p"));
    REQUIRE_FALSE(apps.empty());
    CHECK(apps.front().rule_id == "commutativity-and");
    CHECK(recognize(parse("p"), parse("p")).empty());
  }

  TEST_CASE("absorption advisory after a correct non-absorption step") {
    auto d = check("~(~q \\/ r) \\/ q \\/ r", "(~~q /\\ ~r) \\/ q \\/ r");
    CHECK(d.kind == DiagnosisKind::Correct);
    CHECK(d.advisories.empty());
    auto d2 = check("(~~q /\\ ~r) \\/ q \\/ r", "(q /\\ ~r) \\/ q \\/ r");
    REQUIRE(d2.advisories.size() == 1);
    CHECK(d2.advisories[0].kind == AdvisoryKind::AbsorptionAvailable);
    auto none = check("(~~q /\\ ~r) \\/ q \\/ r", "(q /\\ ~r) \\/ q \\/ r", std::nullopt, Mode::Lenient, {false, true});
    CHECK(none.advisories.empty());
  }

  TEST_CASE("advisories: solution length and divergence") {
    auto adv = advisories_for(parse("p"), StepContext{std::nullopt, 5, 4, false});
    REQUIRE(adv.size() == 2);
    CHECK(adv[0].kind == AdvisoryKind::SolutionLongerThanWorked);
    CHECK(adv[1].kind == AdvisoryKind::DivergedFromStrategy);
    CHECK(advisories_for(parse("p"), StepContext{std::nullopt, 4, 4, true}).empty());
  }

  TEST_CASE("kind names") {
    CHECK(to_string(DiagnosisKind::BuggyButEquivalent) == "buggy-but-equivalent");
    CHECK(to_string(Mode::Strict) == "strict");
    CHECK(parse_direction("backward") == ChainDirection::Backward);
    CHECK_FALSE(parse_direction("up"));
  }
}
