// Random formulas, rule instances and rewrites for property tests.
#pragma once

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "logex/formula.hpp"
#include "logex/pattern.hpp"
#include "logex/rules.hpp"

namespace testgen {

using logex::Formula;
using Rng = std::mt19937_64;

inline std::string atom_name(std::size_t i) {
  static const char* names[] = {"p", "q", "r", "s", "t", "u", "v", "w"};
  return i < 8 ? names[i] : "a" + std::to_string(i);
}

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

struct FormulaOptions {
  std::size_t atoms = 3;
  int depth = 4;
  bool constants = true;
  bool implications = true;
};

inline Formula random_formula(Rng& rng, const FormulaOptions& o, int depth) {
  std::uniform_real_distribution<double> u(0, 1);
  if (depth <= 0 || u(rng) < 0.2) {
    if (o.constants && u(rng) < 0.08) return u(rng) < 0.5 ? Formula::truth() : Formula::falsity();
    return Formula::atom(atom_name(pick(rng, o.atoms)));
  }
  const std::size_t choices = o.implications ? 5 : 3;
  switch (pick(rng, choices)) {
    case 0: return Formula::negation(random_formula(rng, o, depth - 1));
    case 1:
    case 2: {
      std::vector<Formula> ops;
      std::size_t n = 2 + pick(rng, 2);
      for (std::size_t i = 0; i < n; ++i) ops.push_back(random_formula(rng, o, depth - 1));
      return Formula::nary(pick(rng, 2) ? logex::Connective::And : logex::Connective::Or, std::move(ops));
    }
    case 3: return Formula::implication(random_formula(rng, o, depth - 1), random_formula(rng, o, depth - 1));
    default: return Formula::biconditional(random_formula(rng, o, depth - 1), random_formula(rng, o, depth - 1));
  }
}

inline Formula random_formula(Rng& rng, const FormulaOptions& o = {}) { return random_formula(rng, o, o.depth); }

// The solver corpus: up to five atoms, depth drawn uniformly from 1..5.
inline Formula corpus_formula(Rng& rng) {
  FormulaOptions o{5, 1 + static_cast<int>(pick(rng, 5)), true, true};
  return random_formula(rng, o);
}

// Singles and lists of a pattern, element names of each() excluded.
inline void pattern_metas(const logex::Pattern& p, std::set<std::string>& singles,
                          std::set<std::string>& lists, const std::string& local = "") {
  using K = logex::Pattern::Kind;
  if (p.kind() == K::Meta && p.name() != local) singles.insert(p.name());
  if (p.kind() == K::Each) {
    lists.insert(p.name());
    pattern_metas(p.children()[0], singles, lists, p.element());
    return;
  }
  for (const auto& c : p.children()) pattern_metas(c, singles, lists, local);
}

inline logex::Bindings random_bindings(Rng& rng, const logex::RuleVariant& v, const FormulaOptions& o) {
  std::set<std::string> singles, lists;
  pattern_metas(v.lhs, singles, lists);
  pattern_metas(v.rhs, singles, lists);
  logex::Bindings b;
  FormulaOptions small = o;
  small.depth = std::max(1, o.depth - 1);
  for (const auto& s : singles) b.single.emplace(s, random_formula(rng, small));
  for (const auto& l : lists) {
    std::vector<Formula> xs;
    std::size_t n = 2 + pick(rng, 3);
    for (std::size_t i = 0; i < n; ++i) xs.push_back(random_formula(rng, small));
    b.lists.emplace(l, std::move(xs));
  }
  return b;
}

// Bindings for metas that only occur on the produced side.
inline logex::Bindings extra_bindings(Rng& rng, const logex::Pattern& from, const logex::Pattern& to,
                                      const FormulaOptions& o) {
  std::set<std::string> fs, fl, ts, tl;
  pattern_metas(from, fs, fl);
  pattern_metas(to, ts, tl);
  logex::Bindings b;
  FormulaOptions small = o;
  small.depth = 1;
  for (const auto& s : ts) {
    if (!fs.count(s)) b.single.emplace(s, random_formula(rng, small));
  }
  return b;
}

struct Rewrite {
  const logex::Rule* rule;
  const logex::RuleVariant* variant;
  logex::Orientation orientation;
  logex::Position position;
  Formula after;
};

// All applicable (rule, variant, orientation, position) rewrites of f.
inline std::vector<Rewrite> all_rewrites(Rng& rng, const Formula& f, const FormulaOptions& o) {
  std::vector<Rewrite> out;
  for (const auto& pos : logex::positions(f)) {
    for (const auto& rule : logex::standard_rules()) {
      for (const auto& v : rule.variants) {
        for (auto orient : {logex::Orientation::LeftToRight, logex::Orientation::RightToLeft}) {
          const auto& from = orient == logex::Orientation::LeftToRight ? v.lhs : v.rhs;
          const auto& to = orient == logex::Orientation::LeftToRight ? v.rhs : v.lhs;
          auto extra = extra_bindings(rng, from, to, o);
          auto apps = logex::apply_all(rule, v, orient, f, pos, extra);
          for (auto& a : apps) {
            if (a.after != f) out.push_back({&rule, &v, orient, pos, a.after});
          }
        }
      }
    }
  }
  return out;
}

// A random sound rewrite; rewrites that blow the formula up are skipped.
inline std::optional<Rewrite> random_rewrite(Rng& rng, const Formula& f, const FormulaOptions& o,
                                             std::size_t max_size = 60) {
  auto all = all_rewrites(rng, f, o);
  std::erase_if(all, [&](const Rewrite& r) { return r.after.size() > max_size; });
  if (all.empty()) return std::nullopt;
  return all[pick(rng, all.size())];
}

}  // namespace testgen
