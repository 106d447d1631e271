#include "logex/strategy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <tuple>
#include <unordered_map>

#include "logex/semantics.hpp"
#include "logex/syntax.hpp"

namespace logex {

std::string_view to_string(NormalForm nf) { return nf == NormalForm::Dnf ? "dnf" : "cnf"; }

namespace {

constexpr std::size_t kStepGuard = 20000;

const Rule& rule(std::string_view id) {
  const Rule* r = find_rule(id);
  if (!r) throw std::logic_error("missing catalog rule " + std::string(id));
  return *r;
}

std::optional<RuleApplication> make_step(const Formula& f, const Rule& r, std::string_view variant,
                                         Orientation o, const Position& pos,
                                         const Bindings& extra = {}) {
  auto after = apply(r, variant, o, f, pos, extra);
  if (!after || *after == f) return std::nullopt;
  return RuleApplication{r.id, std::string(variant), pos, o, f, *after};
}

Position at(std::vector<std::size_t> path, std::optional<Span> span = std::nullopt) {
  return Position{std::move(path), span};
}

bool literal_or_constant(const Formula& f) { return f.is_literal() || f.is_constant(); }

bool is_clause_of(const Formula& f, Connective inner) {
  if (literal_or_constant(f)) return true;
  if (!f.is(inner)) return false;
  return std::all_of(f.operands().begin(), f.operands().end(), literal_or_constant);
}

bool is_nf(const Formula& f, Connective outer, Connective inner) {
  if (is_clause_of(f, inner)) return true;
  if (!f.is(outer)) return false;
  return std::all_of(f.operands().begin(), f.operands().end(),
                     [&](const Formula& g) { return is_clause_of(g, inner); });
}

// Node positions only, breadth first, as in positions().
std::vector<std::pair<Position, const Formula*>> nodes_breadth_first(const Formula& f) {
  std::vector<std::pair<Position, const Formula*>> out;
  out.emplace_back(Position::root(), &f);
  for (std::size_t next = 0; next < out.size(); ++next) {
    const Formula* node = out[next].second;
    for (std::size_t i = 0; i < node->arity(); ++i) {
      auto path = out[next].first.path;
      path.push_back(i);
      out.emplace_back(Position{std::move(path), std::nullopt}, &node->operands()[i]);
    }
  }
  return out;
}

template <typename Visit>
bool for_each_node(const Formula& f, Visit&& visit) {
  for (const auto& [pos, node] : nodes_breadth_first(f)) {
    if (visit(pos, *node)) return true;
  }
  return false;
}

bool first_innermost_iff(const Formula& f, std::vector<std::size_t>& path) {
  for (std::size_t i = 0; i < f.arity(); ++i) {
    path.push_back(i);
    if (first_innermost_iff(f.operand(i), path)) return true;
    path.pop_back();
  }
  return f.is(Connective::Iff);
}

std::optional<RuleApplication> iff_step(const Formula& f) {
  std::vector<std::size_t> path;
  if (!first_innermost_iff(f, path)) return std::nullopt;
  return make_step(f, rule("equivalence-def"), "base", Orientation::LeftToRight, at(path));
}

std::optional<RuleApplication> imp_step(const Formula& f) {
  std::optional<RuleApplication> out;
  for_each_node(f, [&](const Position& pos, const Formula& sub) {
    if (!sub.is(Connective::Implies)) return false;
    out = make_step(f, rule("implication-def"), "base", Orientation::LeftToRight, pos);
    return true;
  });
  return out;
}

std::optional<RuleApplication> neg_step(const Formula& f) {
  std::optional<RuleApplication> out;
  for_each_node(f, [&](const Position& pos, const Formula& sub) {
    if (!sub.is(Connective::Not)) return false;
    const Formula& c = sub.operand(0);
    const char* id = nullptr;
    const char* variant = "base";
    switch (c.kind()) {
      case Connective::Not: id = "double-negation"; break;
      case Connective::And: id = "demorgan-and"; variant = "general"; break;
      case Connective::Or: id = "demorgan-or"; variant = "general"; break;
      case Connective::True: id = "not-true"; break;
      case Connective::False: id = "not-false"; break;
      default: return false;
    }
    out = make_step(f, rule(id), variant, Orientation::LeftToRight, pos);
    return true;
  });
  return out;
}

std::optional<RuleApplication> distribute_step(const Formula& f, NormalForm nf) {
  const Connective inner = nf == NormalForm::Dnf ? Connective::And : Connective::Or;
  const Connective outer = nf == NormalForm::Dnf ? Connective::Or : Connective::And;
  const Rule& r = rule(nf == NormalForm::Dnf ? "distr-and-over-or" : "distr-or-over-and");
  std::optional<RuleApplication> out;
  // Innermost first, so outer distributions copy operands that are already
  // in normal form.
  auto all = nodes_breadth_first(f);
  std::reverse(all.begin(), all.end());
  for (const auto& [pos, node] : all) {
    const Formula& sub = *node;
    if (!sub.is(inner)) continue;
    auto ops = sub.operands();
    auto it = std::find_if(ops.begin(), ops.end(), [&](const Formula& g) { return g.is(outer); });
    if (it == ops.end()) continue;
    auto i = static_cast<std::size_t>(it - ops.begin());
    if (i == 0) {
      out = make_step(f, r, "general-mirror", Orientation::LeftToRight, pos);
    } else {
      Position p = pos;
      if (i + 1 < sub.arity()) p.span = Span{0, i + 1};
      out = make_step(f, r, "general", Orientation::LeftToRight, p);
    }
    return out;
  }
  return out;
}

using RuleGroup = std::vector<std::string_view>;

const std::vector<RuleGroup>& simplification_groups() {
  static const std::vector<RuleGroup> groups = {
      {"complement-or", "complement-and"},
      {"true-and", "false-or", "true-or", "false-and"},
      {"idempotency-and", "idempotency-or"},
      {"absorption-or", "absorption-and"},
  };
  return groups;
}

// Used while expanding to minterms: nothing that would fold a tautology
// back into T.
const std::vector<RuleGroup>& expansion_groups() {
  static const std::vector<RuleGroup> groups = {
      {"complement-and"},
      {"true-and", "false-or", "false-and"},
      {"idempotency-and", "idempotency-or"},
  };
  return groups;
}

// First redex of the group among the node's own positions (the node, then
// its spans), as a position relative to the node.
struct LocalRedex {
  Position position;
  const Rule* rule;
  const RuleVariant* variant;
};

std::optional<LocalRedex> local_redex(const Formula& node, const RuleGroup& group) {
  struct Candidate {
    std::size_t order;  // index in positions() order
    std::size_t rule;
    std::size_t variant;
  };
  const std::size_t k = node.arity();
  auto position_of = [&](const Span& sp) {
    return sp.length == k ? Position::root() : Position{{}, sp};
  };
  // positions() lists the node, then spans by decreasing length and start.
  auto order_of = [&](const Span& sp) {
    return sp.length == k ? 0 : (k - sp.length) * k + sp.start + 1;
  };
  std::vector<const Rule*> rules;
  for (auto id : group) rules.push_back(&rule(id));
  std::vector<Candidate> candidates;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const auto& vars = rules[r]->variants;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if (!node.is_nary()) {
        candidates.push_back({0, r, v});
        continue;
      }
      for (const auto& sp : candidate_spans(vars[v].lhs, node)) candidates.push_back({order_of(sp), r, v});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.order, x.rule, x.variant) < std::tie(y.order, y.rule, y.variant);
  });
  for (const auto& c : candidates) {
    Position pos = Position::root();
    if (c.order != 0) {
      std::size_t len = k - (c.order - 1) / k;
      pos = position_of(Span{(c.order - 1) % k, len});
    }
    const Rule& r = *rules[c.rule];
    const RuleVariant& var = r.variants[c.variant];
    if (!may_match_at(var.lhs, node, pos)) continue;
    auto after = apply(r, var.id, Orientation::LeftToRight, node, pos);
    if (after && *after != node) return LocalRedex{pos, &r, &var};
  }
  return std::nullopt;
}

// Whether a subtree holds a redex of each group, memoized per thread. A
// rewrite only creates new nodes along one path, so each step re-examines
// little of the formula.
class RedexIndex {
 public:
  explicit RedexIndex(const std::vector<RuleGroup>& groups) : groups_(groups) {}

  bool contains(const Formula& f, std::size_t group) {
    auto it = memo_.find(f);
    if (it == memo_.end()) {
      if (memo_.size() > kMaxEntries) memo_.clear();
      std::vector<bool> bits(groups_.size(), false);
      for (std::size_t g = 0; g < groups_.size(); ++g) {
        bool found = local_redex(f, groups_[g]).has_value();
        for (std::size_t i = 0; !found && i < f.arity(); ++i) found = contains(f.operand(i), g);
        bits[g] = found;
      }
      it = memo_.emplace(f, std::move(bits)).first;
    }
    return it->second[group];
  }

 private:
  static constexpr std::size_t kMaxEntries = 200000;
  const std::vector<RuleGroup>& groups_;
  std::unordered_map<Formula, std::vector<bool>> memo_;
};

RedexIndex& redex_index(const std::vector<RuleGroup>& groups) {
  thread_local std::map<const void*, std::unique_ptr<RedexIndex>> indexes;
  auto& slot = indexes[&groups];
  if (!slot) slot = std::make_unique<RedexIndex>(groups);
  return *slot;
}

// Leftmost-outermost in positions() order, groups in priority order.
std::optional<RuleApplication> simplify_step(const Formula& f, const std::vector<RuleGroup>& groups) {
  RedexIndex& index = redex_index(groups);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (!index.contains(f, g)) continue;
    std::deque<std::pair<const Formula*, std::vector<std::size_t>>> queue;
    queue.emplace_back(&f, std::vector<std::size_t>{});
    while (!queue.empty()) {
      auto [node, path] = std::move(queue.front());
      queue.pop_front();
      if (auto hit = local_redex(*node, groups[g])) {
        Position pos{path, hit->position.span};
        return make_step(f, *hit->rule, hit->variant->id, Orientation::LeftToRight, pos);
      }
      for (std::size_t i = 0; i < node->arity(); ++i) {
        if (!index.contains(node->operand(i), g)) continue;
        auto child = path;
        child.push_back(i);
        queue.emplace_back(&node->operands()[i], std::move(child));
      }
    }
  }
  return std::nullopt;
}

enum class Phase { Iff, Imp, Neg, Distribute, Simplify, Done };

struct PhaseStep {
  Phase phase = Phase::Done;
  std::optional<RuleApplication> step;
};

PhaseStep normalization_step(const Formula& f, NormalForm nf);

PhaseStep strategy_step(const Formula& f, NormalForm nf) {
  // Simplification redexes are taken as soon as they appear; this keeps
  // the copies made by equivalence elimination and distribution small.
  if (auto s = simplify_step(f, simplification_groups())) return {Phase::Simplify, s};
  return normalization_step(f, nf);
}

// The next normalization step, ignoring simplification redexes.
PhaseStep normalization_step(const Formula& f, NormalForm nf) {
  if (auto s = iff_step(f)) return {Phase::Iff, s};
  if (auto s = imp_step(f)) return {Phase::Imp, s};
  if (auto s = neg_step(f)) return {Phase::Neg, s};
  if (auto s = distribute_step(f, nf)) return {Phase::Distribute, s};
  return {};
}

// Sort keys: constants, then literals by atom (positive first), then
// anything else by its text.
using LiteralKey = std::tuple<int, std::string, int>;

LiteralKey literal_key(const Formula& f) {
  switch (f.kind()) {
    case Connective::True: return {0, "T", 0};
    case Connective::False: return {0, "F", 0};
    case Connective::Atom: return {1, f.name(), 0};
    case Connective::Not:
      if (f.operand(0).is(Connective::Atom)) return {1, f.operand(0).name(), 1};
      break;
    default: break;
  }
  return {2, print(f), 0};
}

std::vector<LiteralKey> term_key(const Formula& f) {
  std::vector<LiteralKey> key;
  if (f.is(Connective::And)) {
    for (const auto& g : f.operands()) key.push_back(literal_key(g));
    std::sort(key.begin(), key.end());
  } else {
    key.push_back(literal_key(f));
  }
  return key;
}

std::optional<RuleApplication> sort_step(const Formula& f) {
  std::optional<RuleApplication> out;
  for (Connective kind : {Connective::And, Connective::Or}) {
    const Rule& r = rule(kind == Connective::And ? "commutativity-and" : "commutativity-or");
    bool found = for_each_node(f, [&](const Position& pos, const Formula& sub) {
      if (!sub.is(kind)) return false;
      for (std::size_t i = 0; i + 1 < sub.arity(); ++i) {
        if (term_key(sub.operand(i)) > term_key(sub.operand(i + 1))) {
          Position p = pos;
          if (sub.arity() > 2) p.span = Span{i, 2};
          out = make_step(f, r, "base", Orientation::LeftToRight, p);
          return true;
        }
      }
      return false;
    });
    if (found) return out;
  }
  return std::nullopt;
}

// Adds the first missing atom to one term: C => C /\ T => C /\ (a \/ ~a)
// => (C /\ a) \/ (C /\ ~a).
std::vector<RuleApplication> expansion_steps(const Formula& f, const std::vector<std::string>& universe) {
  if (universe.empty()) return {};
  if (f.is(Connective::True)) {
    Bindings b;
    b.single.emplace("phi", Formula::atom(universe.front()));
    auto s = make_step(f, rule("complement-or"), "base", Orientation::RightToLeft, Position::root(), b);
    return s ? std::vector<RuleApplication>{*s} : std::vector<RuleApplication>{};
  }
  if (f.is(Connective::False)) return {};
  std::vector<Formula> terms;
  if (f.is(Connective::Or)) {
    terms.assign(f.operands().begin(), f.operands().end());
  } else {
    terms.push_back(f);
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto present = atoms(terms[i]);
    auto missing = std::find_if(universe.begin(), universe.end(), [&](const std::string& a) {
      return !std::binary_search(present.begin(), present.end(), a);
    });
    if (missing == universe.end()) continue;
    Position term_pos = f.is(Connective::Or) ? at({i}) : Position::root();
    std::vector<RuleApplication> out;
    auto s1 = make_step(f, rule("true-and"), "base", Orientation::RightToLeft, term_pos);
    if (!s1) return {};
    out.push_back(*s1);
    const Formula widened = subformula_at(s1->after, term_pos);
    Position t_pos = term_pos;
    t_pos.path.push_back(widened.arity() - 1);
    Bindings b;
    b.single.emplace("phi", Formula::atom(*missing));
    auto s2 = make_step(s1->after, rule("complement-or"), "base", Orientation::RightToLeft, t_pos, b);
    if (!s2) return {};
    out.push_back(*s2);
    auto s3 = make_step(s2->after, rule("distr-and-over-or"), "general", Orientation::LeftToRight,
                        term_pos);
    if (!s3) return {};
    out.push_back(*s3);
    return out;
  }
  return {};
}

void guard(std::size_t n) {
  if (n > kStepGuard) throw std::logic_error("strategy exceeded its step bound");
}

void run_canonical_sort(std::vector<RuleApplication>& steps, const Formula& start) {
  Formula cur = steps.empty() ? start : steps.back().after;
  while (true) {
    auto s = simplify_step(cur, simplification_groups());
    if (!s) s = sort_step(cur);
    if (!s) return;
    cur = s->after;
    steps.push_back(std::move(*s));
    guard(steps.size());
  }
}

void run_minterm_expansion(std::vector<RuleApplication>& steps, const Formula& start,
                           const std::vector<std::string>& universe) {
  Formula cur = steps.empty() ? start : steps.back().after;
  while (true) {
    auto s = simplify_step(cur, expansion_groups());
    if (!s) s = sort_step(cur);
    if (s) {
      cur = s->after;
      steps.push_back(std::move(*s));
    } else {
      auto macro = expansion_steps(cur, universe);
      if (macro.empty()) return;
      cur = macro.back().after;
      for (auto& m : macro) steps.push_back(std::move(m));
    }
    guard(steps.size());
  }
}

const Formula& head_of(const Formula& start, const std::vector<RuleApplication>& steps) {
  return steps.empty() ? start : steps.back().after;
}

std::vector<Formula> states(const Formula& start, const std::vector<RuleApplication>& steps) {
  std::vector<Formula> out{start};
  for (const auto& s : steps) out.push_back(s.after);
  return out;
}

bool permitted(const std::vector<RuleApplication>& apps, const std::vector<std::string_view>& ltr,
               const std::vector<std::string_view>& any) {
  return std::any_of(apps.begin(), apps.end(), [&](const RuleApplication& a) {
    if (std::find(any.begin(), any.end(), a.rule_id) != any.end()) return true;
    return a.orientation == Orientation::LeftToRight &&
           std::find(ltr.begin(), ltr.end(), a.rule_id) != ltr.end();
  });
}

std::vector<std::string_view> phase_rules(Phase phase, NormalForm nf) {
  switch (phase) {
    case Phase::Iff: return {"equivalence-def"};
    case Phase::Imp: return {"implication-def"};
    case Phase::Neg: return {"double-negation", "demorgan-and", "demorgan-or", "not-true", "not-false"};
    case Phase::Distribute:
      return {nf == NormalForm::Dnf ? "distr-and-over-or" : "distr-or-over-and"};
    case Phase::Simplify: {
      std::vector<std::string_view> out;
      for (const auto& g : simplification_groups()) out.insert(out.end(), g.begin(), g.end());
      return out;
    }
    case Phase::Done: return {};
  }
  return {};
}

std::string rule_display(const std::string& id) {
  const Rule* r = find_rule(id);
  return r ? r->name : id;
}


boost::multiprecision::cpp_int distribution_weight(const Formula& f, NormalForm nf) {
  using boost::multiprecision::cpp_int;
  const Connective sum = nf == NormalForm::Dnf ? Connective::Or : Connective::And;
  switch (f.kind()) {
    case Connective::Atom:
    case Connective::True:
    case Connective::False: return 2;
    case Connective::Not:
      if (f.operand(0).is(Connective::Atom)) return 2;
      return distribution_weight(f.operand(0), nf) + 1;
    case Connective::Implies:
    case Connective::Iff:
      return distribution_weight(f.operand(0), nf) + distribution_weight(f.operand(1), nf) + 1;
    case Connective::And:
    case Connective::Or: {
      if (f.is(sum)) {
        cpp_int total = f.arity() - 1;
        for (const auto& g : f.operands()) total += distribution_weight(g, nf);
        return total;
      }
      cpp_int product = 1;
      for (const auto& g : f.operands()) product *= distribution_weight(g, nf);
      return product;
    }
  }
  return 2;
}

void count_measure(const Formula& f, PhaseMeasure& m) {
  if (f.is(Connective::Iff)) ++m.equivalences;
  if (f.is(Connective::Implies)) ++m.implications;
  if (f.is(Connective::Not) && !f.operand(0).is(Connective::Atom)) m.negation_depth += f.operand(0).size();
  for (const auto& g : f.operands()) count_measure(g, m);
}

}  // namespace

bool is_dnf(const Formula& f) { return is_nf(f, Connective::Or, Connective::And); }
bool is_cnf(const Formula& f) { return is_nf(f, Connective::And, Connective::Or); }
bool is_normal_form(const Formula& f, NormalForm nf) {
  return nf == NormalForm::Dnf ? is_dnf(f) : is_cnf(f);
}

bool is_fully_simplified(const Formula& f) {
  return !simplify_step(f, simplification_groups()).has_value();
}

PhaseMeasure phase_measure(const Formula& f, NormalForm nf) {
  PhaseMeasure m;
  count_measure(f, m);
  m.distribution = distribution_weight(f, nf);
  m.size = f.size();
  return m;
}

DerivationState solve_normal_form(const Formula& start, NormalForm nf) {
  DerivationState state{nf, start, {}};
  Formula cur = start;
  while (auto s = strategy_step(cur, nf).step) {
    cur = s->after;
    state.steps.push_back(std::move(*s));
    guard(state.steps.size());
  }
  return state;
}

ProofState solve_proof(const Formula& lhs, const Formula& rhs) {
  if (!equivalent(lhs, rhs)) throw NotEquivalentError("the two formulas are not equivalent");
  ProofState out{lhs, rhs, {}, {}};
  if (lhs == rhs) return out;

  auto fwd = solve_normal_form(lhs, NormalForm::Dnf).steps;
  auto bwd = solve_normal_form(rhs, NormalForm::Dnf).steps;
  if (head_of(lhs, fwd) != head_of(rhs, bwd)) {
    run_canonical_sort(fwd, lhs);
    run_canonical_sort(bwd, rhs);
  }
  if (head_of(lhs, fwd) != head_of(rhs, bwd)) {
    auto universe = atoms(head_of(lhs, fwd));
    auto more = atoms(head_of(rhs, bwd));
    universe.insert(universe.end(), more.begin(), more.end());
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    run_minterm_expansion(fwd, lhs, universe);
    run_minterm_expansion(bwd, rhs, universe);
  }

  const auto fs = states(lhs, fwd);
  const auto bs = states(rhs, bwd);
  std::unordered_map<Formula, std::size_t> first_in_bwd;
  for (std::size_t j = bs.size(); j-- > 0;) first_in_bwd[bs[j]] = j;
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto it = first_in_bwd.find(fs[i]);
    if (it == first_in_bwd.end()) continue;
    if (!best || i + it->second <= best->first + best->second) best = {i, it->second};
  }
  if (!best) throw std::logic_error("proof strategy did not reach a common formula");
  fwd.erase(fwd.begin() + static_cast<std::ptrdiff_t>(best->first), fwd.end());
  bwd.erase(bwd.begin() + static_cast<std::ptrdiff_t>(best->second), bwd.end());
  out.forward = std::move(fwd);
  out.backward = std::move(bwd);
  return out;
}

NextStep next_step(const DerivationState& state) {
  auto s = strategy_step(state.head(), state.target).step;
  if (!s) throw ExerciseSolved();
  return {std::move(*s), ChainDirection::Forward};
}

NextStep next_step(const ProofState& state) {
  if (state.closed()) throw ExerciseSolved();
  auto sol = solve_proof(state.forward_head(), state.backward_head());
  if (!sol.forward.empty()) return {sol.forward.front(), ChainDirection::Forward};
  return {sol.backward.front(), ChainDirection::Backward};
}

WorkedSolution to_worked_solution(const DerivationState& solved) {
  WorkedSolution out;
  for (const auto& s : solved.steps) out.push_back({ChainDirection::Forward, s.rule_id, s.after});
  return out;
}

WorkedSolution to_worked_solution(const ProofState& solved) {
  WorkedSolution out;
  for (const auto& s : solved.forward) out.push_back({ChainDirection::Forward, s.rule_id, s.after});
  for (const auto& s : solved.backward) out.push_back({ChainDirection::Backward, s.rule_id, s.after});
  return out;
}

namespace {

void check_level(int level) {
  if (level < 1 || level > 3) throw std::invalid_argument("hint level must be 1, 2 or 3");
}

Hint step_hint(int level, NextStep step, bool proof) {
  Hint h;
  h.level = level;
  const std::string name = rule_display(step.application.rule_id);
  std::string side;
  if (proof) side = step.direction == ChainDirection::Forward ? " in a forward step" : " in a backward step";
  if (level == 1) {
    h.text = "Apply " + name + side + ".";
  } else {
    h.text = "Apply " + name + side + " at " + to_string(step.application.position) + " to get " +
             print(step.application.after) + ".";
    h.step = std::move(step);
  }
  return h;
}

}  // namespace

Hint hint(const DerivationState& state, int level) {
  check_level(level);
  if (level == 3) {
    Hint h;
    h.level = 3;
    h.solution = to_worked_solution(solve_normal_form(state.start, state.target));
    h.text = "Worked-out solution in " + std::to_string(h.solution.size()) + " steps.";
    return h;
  }
  return step_hint(level, next_step(state), false);
}

Hint hint(const ProofState& state, int level) {
  check_level(level);
  if (level == 3) {
    Hint h;
    h.level = 3;
    h.solution = to_worked_solution(solve_proof(state.lhs, state.rhs));
    h.text = "Worked-out solution in " + std::to_string(h.solution.size()) + " steps.";
    return h;
  }
  return step_hint(level, next_step(state), true);
}

bool strategy_permits(const Formula& before, const Formula& after, NormalForm nf) {
  // Any simplification, or any step of the current normalization phase.
  Phase phase = normalization_step(before, nf).phase;
  auto ltr = phase_rules(Phase::Simplify, nf);
  auto more = phase_rules(phase, nf);
  ltr.insert(ltr.end(), more.begin(), more.end());
  return permitted(recognize(before, after), ltr, {});
}

bool proof_strategy_permits(const Formula& before, const Formula& after) {
  Phase phase = normalization_step(before, NormalForm::Dnf).phase;
  auto apps = recognize(before, after);
  auto ltr = phase_rules(Phase::Simplify, NormalForm::Dnf);
  if (phase != Phase::Done) {
    auto more = phase_rules(phase, NormalForm::Dnf);
    ltr.insert(ltr.end(), more.begin(), more.end());
    return permitted(apps, ltr, {});
  }
  // Normalized: canonical sorting and minterm expansion.
  ltr.push_back("distr-and-over-or");
  if (permitted(apps, ltr, {"commutativity-and", "commutativity-or"})) return true;
  return std::any_of(apps.begin(), apps.end(), [](const RuleApplication& a) {
    return a.orientation == Orientation::RightToLeft &&
           (a.rule_id == "true-and" || a.rule_id == "complement-or");
  });
}

bool on_path(const DerivationState& state) {
  return std::all_of(state.steps.begin(), state.steps.end(), [&](const RuleApplication& s) {
    return !s.rule_id.empty() && strategy_permits(s.before, s.after, state.target);
  });
}

bool on_path(const ProofState& state) {
  auto ok = [](const RuleApplication& s) {
    return !s.rule_id.empty() && proof_strategy_permits(s.before, s.after);
  };
  return std::all_of(state.forward.begin(), state.forward.end(), ok) &&
         std::all_of(state.backward.begin(), state.backward.end(), ok);
}

std::size_t worked_solution_length(const Formula& start, NormalForm nf, const Formula& target) {
  auto sol = solve_normal_form(start, nf);
  auto seq = states(start, sol.steps);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] == target) return i;
  }
  if (!equivalent(seq.back(), target)) {
    throw std::invalid_argument("target is not equivalent to the exercise");
  }
  return sol.steps.size();
}

std::size_t worked_solution_length(const Formula& lhs, const Formula& rhs) {
  return solve_proof(lhs, rhs).step_count();
}

}  // namespace logex
