#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "logex/formula.hpp"
#include "logex/strategy.hpp"

namespace logex {

enum class ExerciseKind { ToDnf, ToCnf, Proof };
enum class Difficulty { Easy, Medium, Hard };

std::string_view to_string(ExerciseKind k);  // "dnf", "cnf", "proof"
std::string_view to_string(Difficulty d);
std::optional<ExerciseKind> parse_kind(std::string_view text);
std::optional<Difficulty> parse_difficulty(std::string_view text);
NormalForm normal_form_of(ExerciseKind k);

/// Rubric on worked-solution length: up to 3 easy, 4 to 7 medium, else hard.
Difficulty difficulty_for_length(std::size_t steps);

struct Exercise {
  std::string id;
  ExerciseKind kind = ExerciseKind::ToDnf;
  Difficulty difficulty = Difficulty::Easy;
  int ordinal = 0;
  /// The formula to rewrite, or the left side of a proof.
  Formula start;
  /// Right side of a proof. A tautology exercise has rhs T.
  std::optional<Formula> rhs;
  bool user_created = false;

  const Formula& lhs() const { return start; }
};

/// Length of the exercise's complete worked-out solution.
std::size_t worked_length(const Exercise& e);

struct RejectedExercise {
  enum class Reason { SyntaxError, NotEquivalent, TooManyAtoms, MissingFormula };
  Reason reason;
  std::string message;
};

std::string_view to_string(RejectedExercise::Reason r);

using ExerciseResult = std::variant<Exercise, RejectedExercise>;

/// Validates and grades a student-entered exercise. `rhs_text` is required
/// for proofs and ignored otherwise.
ExerciseResult create_user_exercise(std::string id, ExerciseKind kind, std::string_view text,
                                    std::optional<std::string_view> rhs_text = std::nullopt);

class ExerciseFileError : public std::runtime_error {
 public:
  ExerciseFileError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The fixed exercise sets, loaded from a JSON-lines file: one object per
/// line with id, kind, difficulty, ordinal and either formula or lhs/rhs.
class ExerciseBank {
 public:
  static ExerciseBank parse(std::string_view text);
  static ExerciseBank load(const std::string& path);

  const std::vector<Exercise>& all() const { return exercises_; }
  /// Exercises of one kind in ordinal order.
  std::vector<Exercise> fixed_set(ExerciseKind kind) const;
  const Exercise* find(std::string_view id) const;

  /// FNV-1a over the file contents, as 16 hex digits.
  const std::string& content_hash() const { return hash_; }
  std::string version() const { return "v1-" + hash_; }

 private:
  std::vector<Exercise> exercises_;
  std::string hash_;
};

/// Everything wrong with a bank: set sizes, ordinals, duplicate ids,
/// non-equivalent proofs, unsolvable or overlong exercises, difficulty labels
/// disagreeing with the rubric. Empty when the bank is valid.
std::vector<std::string> validate(const ExerciseBank& bank);

inline constexpr std::size_t kMaxFixedSolutionLength = 25;

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace logex
