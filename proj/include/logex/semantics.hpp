#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logex/formula.hpp"

namespace logex {

using Valuation = std::map<std::string, bool>;

/// Truth tables are the equivalence oracle; beyond this many atoms we refuse.
inline constexpr std::size_t kMaxEquivalenceAtoms = 20;

class MissingAtom : public std::out_of_range {
 public:
  explicit MissingAtom(const std::string& atom)
      : std::out_of_range("valuation does not assign atom '" + atom + "'"), atom_(atom) {}
  const std::string& atom() const { return atom_; }

 private:
  std::string atom_;
};

class TooManyAtoms : public std::length_error {
 public:
  explicit TooManyAtoms(std::size_t n)
      : std::length_error("equivalence check refused: " + std::to_string(n) + " atoms exceeds " +
                          std::to_string(kMaxEquivalenceAtoms)) {}
};

bool evaluate(const Formula& f, const Valuation& v);

/// True iff `a` and `b` agree on every valuation of their combined atoms.
/// Dispatches to the bit-sliced kernel, parallel for large tables.
bool equivalent(const Formula& a, const Formula& b);

/// A valuation on which `a` and `b` differ, if any.
std::optional<Valuation> counterexample(const Formula& a, const Formula& b);

bool is_tautology(const Formula& f);
bool is_satisfiable(const Formula& f);

namespace reference {

/// Row-by-row truth table using `evaluate`; kept as the independent oracle
/// for the kernels below.
bool equivalent(const Formula& a, const Formula& b);

}  // namespace reference

namespace kernel {

/// Postfix program evaluating a formula on 64 truth-table rows at once.
class TruthProgram {
 public:
  TruthProgram(const Formula& f, const std::vector<std::string>& atom_order);

  /// Row r of the table assigns atom i the bit (r >> i) & 1. Returns the
  /// formula's value on rows [64 * block, 64 * block + 64).
  std::uint64_t eval_block(std::uint64_t block, std::vector<std::uint64_t>& stack) const;

 private:
  enum class Op : std::uint8_t { Atom, True, False, Not, And, Or, Implies, Iff };
  struct Instr {
    Op op;
    std::uint32_t arg;  // atom index or operand count
  };
  std::vector<Instr> code_;
};

/// Number of rows where the two programs differ, over a table of 2^n_atoms rows.
std::uint64_t count_differences(const TruthProgram& a, const TruthProgram& b, std::size_t n_atoms,
                                bool parallel);

/// Tables with at least this many rows are split across OpenMP threads.
inline constexpr std::size_t kParallelAtomThreshold = 14;

bool equivalent(const Formula& a, const Formula& b, bool parallel);

}  // namespace kernel

}  // namespace logex
