#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "logex/formula.hpp"

namespace logex {

/// Where and why the input could not be parsed, with a repair hint aimed at
/// a student typing the formula.
struct SyntaxError {
  std::size_t offset = 0;  // byte offset into the input
  std::string token;       // offending token, empty at end of input
  std::string expected;
  std::string suggestion;

  std::string message() const;
  friend bool operator==(const SyntaxError&, const SyntaxError&) = default;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(SyntaxError detail)
      : std::runtime_error(detail.message()), detail_(std::move(detail)) {}
  const SyntaxError& detail() const { return detail_; }

 private:
  SyntaxError detail_;
};

using ParseResult = std::variant<Formula, SyntaxError>;

/// Grammar, loosest to tightest: `<->` (non-associative), `->` (right
/// associative), `\/`, `/\`, `~`. Atoms are `[a-z][a-z0-9]*`; `T` and `F`
/// are the constants. The Unicode symbols ¬ ∧ ∨ → ↔ are accepted as aliases.
ParseResult try_parse(std::string_view text);
/// Throws ParseError.
Formula parse(std::string_view text);

/// Minimal-parenthesis ASCII rendering; parse(print(f)) == f.
std::string print(const Formula& f);

std::ostream& operator<<(std::ostream& os, const Formula& f);

}  // namespace logex
