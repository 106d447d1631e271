#include <doctest.h>

#include "logex/recognizer.hpp"
#include "logex/semantics.hpp"
#include "logex/strategy.hpp"
#include "logex/syntax.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace logex;

namespace {

bool chained(const Formula& start, const std::vector<RuleApplication>& steps) {
  Formula cur = start;
  for (const auto& s : steps) {
    if (s.before != cur) return false;
    cur = s.after;
  }
  return true;
}

bool strictly_correct(const RuleApplication& s) {
  auto d = diagnose(StepSubmission{s.before, print(s.after), s.rule_id, Mode::Strict, ChainDirection::Forward});
  return d.kind == DiagnosisKind::Correct;
}

}  // namespace

TEST_SUITE("strategy") {
  TEST_CASE("normal-form predicates") {
    CHECK(is_dnf(parse("(q /\\ ~r) \\/ q \\/ r")));
    CHECK_FALSE(is_dnf(parse("~(p \\/ q)")));
    CHECK(is_dnf(parse("T")));
    CHECK(is_cnf(parse("T")));
    CHECK(is_dnf(parse("p /\\ ~q")));
    CHECK(is_cnf(parse("p /\\ ~q")));
    CHECK_FALSE(is_cnf(parse("(p /\\ q) \\/ r")));
    CHECK(is_cnf(parse("(p \\/ r) /\\ (q \\/ r)")));
    CHECK_FALSE(is_dnf(parse("p -> q")));
    CHECK_FALSE(is_dnf(parse("~~p")));
  }

  TEST_CASE("worked example: 3 steps to the normal form and 4 to the simplification") {
    auto start = parse("~(q -> r) \\/ q \\/ r");
    auto sol = solve_normal_form(start, NormalForm::Dnf);
    REQUIRE(sol.steps.size() == 4);
    CHECK(sol.steps[2].after == parse("(q /\\ ~r) \\/ q \\/ r"));
    CHECK(sol.head() == parse("q \\/ r"));
    CHECK(sol.steps[3].rule_id == "absorption-or");
    CHECK(worked_solution_length(start, NormalForm::Dnf, parse("(q /\\ ~r) \\/ q \\/ r")) == 3);
    CHECK(worked_solution_length(start, NormalForm::Dnf, parse("q \\/ r")) == 4);
    CHECK(worked_solution_length(start, NormalForm::Dnf, start) == 0);
    // equivalent but not on the generated path: full length
    CHECK(worked_solution_length(start, NormalForm::Dnf, parse("r \\/ q")) == 4);
    CHECK_THROWS_AS(worked_solution_length(start, NormalForm::Dnf, parse("q")), std::invalid_argument);
  }

  TEST_CASE("trivial solves") {
    CHECK(solve_normal_form(parse("p"), NormalForm::Dnf).steps.empty());
    CHECK(solve_normal_form(parse("p"), NormalForm::Cnf).steps.empty());
    auto s = solve_normal_form(parse("p -> q"), NormalForm::Dnf);
    REQUIRE(s.steps.size() == 1);
    CHECK(s.steps[0].rule_id == "implication-def");
    CHECK(s.head() == parse("~p \\/ q"));
  }

  TEST_CASE("nested equivalences are eliminated innermost first") {
    auto s = solve_normal_form(parse("(p <-> q) <-> r"), NormalForm::Dnf);
    REQUIRE_FALSE(s.steps.empty());
    CHECK(s.steps[0].position == Position{{0}, std::nullopt});
    CHECK(is_dnf(s.head()));
  }

  TEST_CASE("next step and hints") {
    DerivationState st{NormalForm::Dnf, parse("~~p"), {}};
    auto ns = next_step(st);
    CHECK(ns.application.rule_id == "double-negation");
    CHECK(ns.application.position == Position::root());

    DerivationState dm{NormalForm::Dnf, parse("~(p /\\ q)"), {}};
    auto h2 = hint(dm, 2);
    REQUIRE(h2.step);
    CHECK(h2.step->application.rule_id == "demorgan-and");
    auto h1 = hint(dm, 1);
    CHECK(h1.text.find("DeMorgan") != std::string::npos);
    CHECK_FALSE(h1.step);
    auto h3 = hint(dm, 3);
    CHECK(h3.solution.size() == solve_normal_form(dm.start, NormalForm::Dnf).steps.size());
    CHECK_THROWS_AS(hint(dm, 4), std::invalid_argument);

    DerivationState done{NormalForm::Dnf, parse("p \\/ q"), {}};
    CHECK_THROWS_AS(next_step(done), ExerciseSolved);
  }

  TEST_CASE("level 3 solves from the original start") {
    auto start = parse("~(q -> r) \\/ q \\/ r");
    auto sol = solve_normal_form(start, NormalForm::Dnf);
    DerivationState st{NormalForm::Dnf, start, {sol.steps[0]}};
    CHECK(hint(st, 3).solution.size() == 4);
  }

  TEST_CASE("proofs") {
    auto p1 = solve_proof(parse("p"), parse("~~p"));
    CHECK(p1.closed());
    CHECK(p1.forward.empty());
    REQUIRE(p1.backward.size() == 1);
    CHECK(p1.backward[0].rule_id == "double-negation");

    auto p2 = solve_proof(parse("p -> q"), parse("~q -> ~p"));
    CHECK(p2.closed());
    CHECK(p2.forward_head() == parse("~p \\/ q"));

    CHECK_THROWS_AS(solve_proof(parse("p"), parse("q")), NotEquivalentError);
  }

  TEST_CASE("proof hints name the direction") {
    ProofState st{parse("p"), parse("~~p"), {}, {}};
    auto h = hint(st, 1);
    CHECK(h.text.find("backward") != std::string::npos);
    CHECK(h.text.find("Double negation") != std::string::npos);
    auto ns = next_step(st);
    CHECK(ns.direction == ChainDirection::Backward);
    st.backward.push_back(ns.application);
    CHECK(st.closed());
    CHECK_THROWS_AS(next_step(st), ExerciseSolved);
  }

  TEST_CASE("tautology as a proof against T") {
    auto p = solve_proof(parse("(p -> q) \\/ (q -> p)"), parse("T"));
    CHECK(p.closed());
    CHECK(p.forward_head() == parse("T"));
  }

  TEST_CASE("minterm expansion closes proofs that simplification cannot") {
    auto p = solve_proof(parse("(p /\\ q) \\/ (p /\\ ~q)"), parse("p"));
    CHECK(p.closed());
    for (const auto& s : p.backward) CHECK(strictly_correct(s));
    auto x = solve_proof(parse("~(p <-> q)"), parse("(p /\\ ~q) \\/ (~p /\\ q)"));
    CHECK(x.closed());
  }

  TEST_CASE("on_path") {
    DerivationState empty{NormalForm::Dnf, parse("~(p /\\ q)"), {}};
    CHECK(on_path(empty));

    DerivationState follow = empty;
    for (int i = 0; i < 3; ++i) {
      try {
        follow.steps.push_back(next_step(follow).application);
      } catch (const ExerciseSolved&) {
        break;
      }
    }
    CHECK(on_path(follow));

    DerivationState dn{NormalForm::Dnf, parse("p \\/ q"), {}};
    auto intro = apply(*find_rule("double-negation"), "base", Orientation::RightToLeft, dn.start,
                       Position{{0}, std::nullopt});
    REQUIRE(intro);
    dn.steps.push_back({"double-negation", "base", Position{{0}, std::nullopt}, Orientation::RightToLeft, dn.start, *intro});
    CHECK_FALSE(on_path(dn));
  }

  TEST_CASE("on_path accepts any position the phase permits") {
    auto start = parse("~(p \\/ q) /\\ ~(r \\/ s)");
    auto second = apply(*find_rule("demorgan-or"), "general", Orientation::LeftToRight, start,
                        Position{{1}, std::nullopt});
    REQUIRE(second);
    CHECK(strategy_permits(start, *second, NormalForm::Dnf));
    CHECK_FALSE(strategy_permits(start, *second, NormalForm::Dnf) == false);
    DerivationState st{NormalForm::Dnf, start, {}};
    st.steps.push_back({"demorgan-or", "general", Position{{1}, std::nullopt}, Orientation::LeftToRight, start, *second});
    CHECK(on_path(st));
  }

  TEST_CASE("property: solutions are chained and sound and strictly correct and in normal form") {
    testgen::Rng rng(17);
    for (int i = 0; i < 120; ++i) {
      auto f = testgen::random_formula(rng, {4, 3, true, true});
      for (auto nf : {NormalForm::Dnf, NormalForm::Cnf}) {
        auto sol = solve_normal_form(f, nf);
        INFO(print(f), " ", to_string(nf));
        CHECK(chained(f, sol.steps));
        CHECK(is_normal_form(sol.head(), nf));
        CHECK(is_fully_simplified(sol.head()));
        CHECK(oracle::equivalent(f, sol.head()));
        for (const auto& s : sol.steps) CHECK(strictly_correct(s));
      }
    }
  }

  TEST_CASE("property: the phase measure strictly decreases on every step") {
    testgen::Rng rng(23);
    for (int i = 0; i < 150; ++i) {
      auto f = testgen::random_formula(rng, {4, 3, true, true});
      for (auto nf : {NormalForm::Dnf, NormalForm::Cnf}) {
        auto sol = solve_normal_form(f, nf);
        for (const auto& s : sol.steps) {
          INFO(s.rule_id, ": ", print(s.before), " => ", print(s.after));
          CHECK(phase_measure(s.after, nf) < phase_measure(s.before, nf));
        }
      }
    }
  }

  TEST_CASE("property: next_step from diverged states reaches the end within 4x the worked length") {
    testgen::Rng rng(31);
    testgen::FormulaOptions o{3, 3, true, true};
    for (int i = 0; i < 200; ++i) {
      auto f = testgen::random_formula(rng, o);
      DerivationState st{NormalForm::Dnf, f, {}};
      // wander off the strategy first
      for (int k = 0; k < 2; ++k) {
        if (auto rw = testgen::random_rewrite(rng, st.head(), o, 30)) {
          st.steps.push_back({rw->rule->id, rw->variant->id, rw->position, rw->orientation, st.head(), rw->after});
        }
      }
      std::size_t bound = 4 * std::max<std::size_t>(1, solve_normal_form(st.head(), NormalForm::Dnf).steps.size());
      std::size_t n = 0;
      while (true) {
        try {
          st.steps.push_back(next_step(st).application);
        } catch (const ExerciseSolved&) {
          break;
        }
        REQUIRE(++n <= bound);
      }
      CHECK(is_dnf(st.head()));
      CHECK(oracle::equivalent(f, st.head()));
    }
  }

  TEST_CASE("property: proof solutions close and every step is strictly correct") {
    testgen::Rng rng(37);
    testgen::FormulaOptions o{3, 3, true, true};
    for (int i = 0; i < 40; ++i) {
      auto f = testgen::random_formula(rng, o);
      Formula g = f;
      for (int k = 0; k < 3; ++k) {
        if (auto rw = testgen::random_rewrite(rng, g, o, 30)) g = rw->after;
      }
      auto p = solve_proof(f, g);
      INFO(print(f), " == ", print(g));
      CHECK(p.closed());
      CHECK(chained(f, p.forward));
      CHECK(chained(g, p.backward));
      for (const auto& s : p.forward) CHECK(strictly_correct(s));
      for (const auto& s : p.backward) CHECK(strictly_correct(s));
      CHECK(on_path(p));
    }
  }
}
