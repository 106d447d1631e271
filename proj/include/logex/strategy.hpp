#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "logex/formula.hpp"
#include "logex/recognizer.hpp"
#include "logex/rules.hpp"

namespace logex {

enum class NormalForm { Dnf, Cnf };

std::string_view to_string(NormalForm nf);

/// Disjunction of conjunctions of literals; a literal, a single conjunction
/// and the constants count too.
bool is_dnf(const Formula& f);
bool is_cnf(const Formula& f);
bool is_normal_form(const Formula& f, NormalForm nf);

/// No complement, true/false, idempotency or absorption rule applies
/// anywhere (left to right).
bool is_fully_simplified(const Formula& f);

/// A normal-form rewriting in progress: the start formula and the steps
/// taken from it. Each step's `before` is the previous step's `after`.
struct DerivationState {
  NormalForm target = NormalForm::Dnf;
  Formula start;
  std::vector<RuleApplication> steps;

  const Formula& head() const { return steps.empty() ? start : steps.back().after; }
};

/// An equivalence proof worked from both ends. `forward` starts at lhs and
/// goes down, `backward` starts at rhs and goes up; the proof is closed
/// when the two heads meet.
struct ProofState {
  Formula lhs;
  Formula rhs;
  std::vector<RuleApplication> forward;
  std::vector<RuleApplication> backward;

  const Formula& forward_head() const { return forward.empty() ? lhs : forward.back().after; }
  const Formula& backward_head() const { return backward.empty() ? rhs : backward.back().after; }
  bool closed() const { return forward_head() == backward_head(); }
  std::size_t step_count() const { return forward.size() + backward.size(); }
};

class NotEquivalentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ExerciseSolved : public std::logic_error {
 public:
  ExerciseSolved() : std::logic_error("exercise already solved") {}
};

/// Deterministic worked-out rewriting to a fully simplified normal form.
/// Simplifications (complement, constants, idempotency, absorption) are
/// taken as soon as they apply. Otherwise the phases run in order: eliminate
/// <-> (innermost first), eliminate -> , push negations inward, distribute
/// (innermost first).
DerivationState solve_normal_form(const Formula& start, NormalForm nf);

/// Both sides are rewritten to a simplified DNF; if those differ they are
/// sorted, and if they still differ expanded to sorted full minterms. The
/// two derivations are cut at their earliest common formula.
ProofState solve_proof(const Formula& lhs, const Formula& rhs);

struct NextStep {
  RuleApplication application;
  ChainDirection direction = ChainDirection::Forward;
};

/// First step of a fresh solve from the current head(s). Throws
/// ExerciseSolved when nothing is left to do.
NextStep next_step(const DerivationState& state);
NextStep next_step(const ProofState& state);

struct WorkedStep {
  ChainDirection direction = ChainDirection::Forward;
  std::string rule_id;
  Formula formula;
};

using WorkedSolution = std::vector<WorkedStep>;

WorkedSolution to_worked_solution(const DerivationState& solved);
WorkedSolution to_worked_solution(const ProofState& solved);

struct Hint {
  int level = 1;
  std::string text;
  std::optional<NextStep> step;  // level 2
  WorkedSolution solution;       // level 3
};

/// Level 1 names the rule (and side, for proofs); level 2 gives the next
/// step; level 3 the worked-out solution from the original exercise.
Hint hint(const DerivationState& state, int level);
Hint hint(const ProofState& state, int level);

/// Whether the step before -> after is one the strategy could take: any
/// rule of the current phase, at any position.
bool strategy_permits(const Formula& before, const Formula& after, NormalForm nf);
/// Same for one chain of a proof, which additionally allows the sorting
/// and expansion steps once the chain reached a simplified DNF.
bool proof_strategy_permits(const Formula& before, const Formula& after);

bool on_path(const DerivationState& state);
bool on_path(const ProofState& state);

/// Steps of the worked-out solution up to the first state equal to
/// `target`; the full length when `target` is only equivalent to the end.
/// Throws std::invalid_argument when `target` is not equivalent.
std::size_t worked_solution_length(const Formula& start, NormalForm nf, const Formula& target);
std::size_t worked_solution_length(const Formula& lhs, const Formula& rhs);

/// Termination measure of the normal-form strategy, compared
/// lexicographically; every strategy step strictly decreases it.
struct PhaseMeasure {
  std::size_t equivalences = 0;
  std::size_t implications = 0;
  std::size_t negation_depth = 0;
  boost::multiprecision::cpp_int distribution = 0;
  std::size_t size = 0;

  friend bool operator<(const PhaseMeasure& a, const PhaseMeasure& b) {
    if (a.equivalences != b.equivalences) return a.equivalences < b.equivalences;
    if (a.implications != b.implications) return a.implications < b.implications;
    if (a.negation_depth != b.negation_depth) return a.negation_depth < b.negation_depth;
    if (a.distribution != b.distribution) return a.distribution < b.distribution;
    return a.size < b.size;
  }
};

PhaseMeasure phase_measure(const Formula& f, NormalForm nf);

}  // namespace logex
