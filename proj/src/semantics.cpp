#include "logex/semantics.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <iterator>
#include <set>

namespace logex {

bool evaluate(const Formula& f, const Valuation& v) {
  switch (f.kind()) {
    case Connective::Atom: {
      auto it = v.find(f.name());
      if (it == v.end()) throw MissingAtom(f.name());
      return it->second;
    }
    case Connective::True: return true;
    case Connective::False: return false;
    case Connective::Not: return !evaluate(f.operand(0), v);
    case Connective::And:
      return std::all_of(f.operands().begin(), f.operands().end(),
                         [&](const Formula& g) { return evaluate(g, v); });
    case Connective::Or:
      return std::any_of(f.operands().begin(), f.operands().end(),
                         [&](const Formula& g) { return evaluate(g, v); });
    case Connective::Implies: return !evaluate(f.operand(0), v) || evaluate(f.operand(1), v);
    case Connective::Iff: return evaluate(f.operand(0), v) == evaluate(f.operand(1), v);
  }
  return false;
}

namespace {

std::vector<std::string> joint_atoms(const Formula& a, const Formula& b) {
  auto xs = atoms(a);
  auto ys = atoms(b);
  std::vector<std::string> out;
  std::set_union(xs.begin(), xs.end(), ys.begin(), ys.end(), std::back_inserter(out));
  if (out.size() > kMaxEquivalenceAtoms) throw TooManyAtoms(out.size());
  return out;
}

Valuation row_valuation(const std::vector<std::string>& names, std::uint64_t row) {
  Valuation v;
  for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = ((row >> i) & 1U) != 0;
  return v;
}

}  // namespace

namespace reference {

bool equivalent(const Formula& a, const Formula& b) {
  auto names = joint_atoms(a, b);
  const std::uint64_t rows = std::uint64_t{1} << names.size();
  for (std::uint64_t r = 0; r < rows; ++r) {
    auto v = row_valuation(names, r);
    if (evaluate(a, v) != evaluate(b, v)) return false;
  }
  return true;
}

}  // namespace reference

namespace kernel {

TruthProgram::TruthProgram(const Formula& f, const std::vector<std::string>& atom_order) {
  std::function<void(const Formula&)> emit = [&](const Formula& g) {
    for (const auto& c : g.operands()) emit(c);
    auto n = static_cast<std::uint32_t>(g.arity());
    switch (g.kind()) {
      case Connective::Atom: {
        auto it = std::lower_bound(atom_order.begin(), atom_order.end(), g.name());
        if (it == atom_order.end() || *it != g.name()) throw MissingAtom(g.name());
        code_.push_back({Op::Atom, static_cast<std::uint32_t>(it - atom_order.begin())});
        break;
      }
      case Connective::True: code_.push_back({Op::True, 0}); break;
      case Connective::False: code_.push_back({Op::False, 0}); break;
      case Connective::Not: code_.push_back({Op::Not, 1}); break;
      case Connective::And: code_.push_back({Op::And, n}); break;
      case Connective::Or: code_.push_back({Op::Or, n}); break;
      case Connective::Implies: code_.push_back({Op::Implies, 2}); break;
      case Connective::Iff: code_.push_back({Op::Iff, 2}); break;
    }
  };
  emit(f);
}

std::uint64_t TruthProgram::eval_block(std::uint64_t block, std::vector<std::uint64_t>& stack) const {
  // Lane patterns for the six atoms that vary inside one 64-row block.
  static constexpr std::array<std::uint64_t, 6> kLane = {
      0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
      0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
  stack.clear();
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::Atom:
        if (ins.arg < 6) {
          stack.push_back(kLane[ins.arg]);
        } else {
          stack.push_back(((block >> (ins.arg - 6)) & 1U) ? ~std::uint64_t{0} : 0);
        }
        break;
      case Op::True: stack.push_back(~std::uint64_t{0}); break;
      case Op::False: stack.push_back(0); break;
      case Op::Not: stack.back() = ~stack.back(); break;
      case Op::And: {
        std::uint64_t acc = ~std::uint64_t{0};
        for (std::uint32_t i = 0; i < ins.arg; ++i) {
          acc &= stack.back();
          stack.pop_back();
        }
        stack.push_back(acc);
        break;
      }
      case Op::Or: {
        std::uint64_t acc = 0;
        for (std::uint32_t i = 0; i < ins.arg; ++i) {
          acc |= stack.back();
          stack.pop_back();
        }
        stack.push_back(acc);
        break;
      }
      case Op::Implies: {
        std::uint64_t rhs = stack.back();
        stack.pop_back();
        stack.back() = ~stack.back() | rhs;
        break;
      }
      case Op::Iff: {
        std::uint64_t rhs = stack.back();
        stack.pop_back();
        stack.back() = ~(stack.back() ^ rhs);
        break;
      }
    }
  }
  return stack.back();
}

std::uint64_t count_differences(const TruthProgram& a, const TruthProgram& b, std::size_t n_atoms,
                                bool parallel) {
  const std::uint64_t rows = std::uint64_t{1} << n_atoms;
  const std::uint64_t blocks = rows <= 64 ? 1 : rows / 64;
  const std::uint64_t valid = rows >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows) - 1;
  std::uint64_t diff = 0;
  if (parallel) {
    const auto n = static_cast<std::int64_t>(blocks);
#pragma omp parallel
    {
      std::vector<std::uint64_t> sa;
      std::vector<std::uint64_t> sb;
#pragma omp for reduction(+ : diff) schedule(static)
      for (std::int64_t blk = 0; blk < n; ++blk) {
        auto bu = static_cast<std::uint64_t>(blk);
        diff += static_cast<std::uint64_t>(
            __builtin_popcountll((a.eval_block(bu, sa) ^ b.eval_block(bu, sb)) & valid));
      }
    }
  } else {
    std::vector<std::uint64_t> sa;
    std::vector<std::uint64_t> sb;
    for (std::uint64_t blk = 0; blk < blocks; ++blk) {
      diff += static_cast<std::uint64_t>(
          __builtin_popcountll((a.eval_block(blk, sa) ^ b.eval_block(blk, sb)) & valid));
    }
  }
  return diff;
}

bool equivalent(const Formula& a, const Formula& b, bool parallel) {
  auto names = joint_atoms(a, b);
  TruthProgram pa(a, names);
  TruthProgram pb(b, names);
  return count_differences(pa, pb, names.size(), parallel) == 0;
}

}  // namespace kernel

bool equivalent(const Formula& a, const Formula& b) {
  if (a == b) return true;
  auto n = joint_atoms(a, b).size();
  return kernel::equivalent(a, b, n >= kernel::kParallelAtomThreshold);
}

std::optional<Valuation> counterexample(const Formula& a, const Formula& b) {
  auto names = joint_atoms(a, b);
  const std::uint64_t rows = std::uint64_t{1} << names.size();
  for (std::uint64_t r = 0; r < rows; ++r) {
    auto v = row_valuation(names, r);
    if (evaluate(a, v) != evaluate(b, v)) return v;
  }
  return std::nullopt;
}

bool is_tautology(const Formula& f) { return equivalent(f, Formula::truth()); }

bool is_satisfiable(const Formula& f) { return !equivalent(f, Formula::falsity()); }

}  // namespace logex
