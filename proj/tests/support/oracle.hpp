// Truth-table oracle for tests, independent of the library's semantics.
#pragma once

#include <map>
#include <set>
#include <string>

#include "logex/formula.hpp"

namespace oracle {

inline void collect(const logex::Formula& f, std::set<std::string>& out) {
  if (f.is(logex::Connective::Atom)) out.insert(f.name());
  for (const auto& g : f.operands()) collect(g, out);
}

inline bool eval(const logex::Formula& f, const std::map<std::string, bool>& v) {
  using C = logex::Connective;
  switch (f.kind()) {
    case C::Atom: return v.at(f.name());
    case C::True: return true;
    case C::False: return false;
    case C::Not: return !eval(f.operand(0), v);
    case C::And:
      for (const auto& g : f.operands()) {
        if (!eval(g, v)) return false;
      }
      return true;
    case C::Or:
      for (const auto& g : f.operands()) {
        if (eval(g, v)) return true;
      }
      return false;
    case C::Implies: return !eval(f.operand(0), v) || eval(f.operand(1), v);
    case C::Iff: return eval(f.operand(0), v) == eval(f.operand(1), v);
  }
  return false;
}

inline bool equivalent(const logex::Formula& a, const logex::Formula& b) {
  std::set<std::string> names;
  collect(a, names);
  collect(b, names);
  std::vector<std::string> xs(names.begin(), names.end());
  for (unsigned long row = 0; row < (1UL << xs.size()); ++row) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < xs.size(); ++i) v[xs[i]] = (row >> i) & 1U;
    if (eval(a, v) != eval(b, v)) return false;
  }
  return true;
}

}  // namespace oracle
