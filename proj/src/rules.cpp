#include "logex/rules.hpp"

#include <algorithm>
#include <stdexcept>

#include "logex/syntax.hpp"

namespace logex {

std::string_view to_string(Orientation o) {
  return o == Orientation::LeftToRight ? "ltr" : "rtl";
}

namespace {

using P = Pattern;

const P kPhi = P::meta("phi");
const P kPsi = P::meta("psi");
const P kChi = P::meta("chi");

P neg(P p) { return P::negation(std::move(p)); }
P conj(P a, P b) { return P::conj({std::move(a), std::move(b)}); }
P disj(P a, P b) { return P::disj({std::move(a), std::move(b)}); }
P conj_each(const std::string& list, P body) { return P::conj({P::each(list, "e", std::move(body))}); }
P disj_each(const std::string& list, P body) { return P::disj({P::each(list, "e", std::move(body))}); }
const P kElem = P::meta("e");

RuleVariant v(std::string id, P lhs, P rhs) { return {std::move(id), std::move(lhs), std::move(rhs)}; }

// phi op psi <=> psi op phi never needs a mirror; every other binary
// And/Or rule gets its top-level operands mirrored.
std::vector<Rule> build_standard() {
  std::vector<Rule> rules;
  rules.push_back({"implication-def", "Implication elimination",
                   {v("base", P::implication(kPhi, kPsi), disj(neg(kPhi), kPsi))}});
  rules.push_back({"equivalence-def", "Equivalence elimination",
                   {v("base", P::biconditional(kPhi, kPsi),
                      disj(conj(kPhi, kPsi), conj(neg(kPhi), neg(kPsi))))}});
  rules.push_back({"demorgan-and", "DeMorgan",
                   {v("base", neg(conj(kPhi, kPsi)), disj(neg(kPhi), neg(kPsi))),
                    v("general", neg(conj_each("phis", kElem)), disj_each("phis", neg(kElem)))}});
  rules.push_back({"demorgan-or", "DeMorgan",
                   {v("base", neg(disj(kPhi, kPsi)), conj(neg(kPhi), neg(kPsi))),
                    v("general", neg(disj_each("phis", kElem)), conj_each("phis", neg(kElem)))}});
  rules.push_back({"double-negation", "Double negation", {v("base", neg(neg(kPhi)), kPhi)}});
  rules.push_back({"idempotency-and", "Idempotency", {v("base", conj(kPhi, kPhi), kPhi)}});
  rules.push_back({"idempotency-or", "Idempotency", {v("base", disj(kPhi, kPhi), kPhi)}});
  rules.push_back({"absorption-or", "Absorption",
                   {v("base", disj(kPhi, conj(kPhi, kPsi)), kPhi),
                    v("mirror", disj(conj(kPhi, kPsi), kPhi), kPhi)}});
  rules.push_back({"absorption-and", "Absorption",
                   {v("base", conj(kPhi, disj(kPhi, kPsi)), kPhi),
                    v("mirror", conj(disj(kPhi, kPsi), kPhi), kPhi)}});
  rules.push_back(
      {"distr-and-over-or", "Distribution",
       {v("base", conj(kPhi, disj(kPsi, kChi)), disj(conj(kPhi, kPsi), conj(kPhi, kChi))),
        v("mirror", conj(disj(kPsi, kChi), kPhi), disj(conj(kPsi, kPhi), conj(kChi, kPhi))),
        v("general", conj(kPhi, disj_each("psis", kElem)), disj_each("psis", conj(kPhi, kElem))),
        v("general-mirror", conj(disj_each("psis", kElem), kPhi),
          disj_each("psis", conj(kElem, kPhi)))}});
  rules.push_back(
      {"distr-or-over-and", "Distribution",
       {v("base", disj(kPhi, conj(kPsi, kChi)), conj(disj(kPhi, kPsi), disj(kPhi, kChi))),
        v("mirror", disj(conj(kPsi, kChi), kPhi), conj(disj(kPsi, kPhi), disj(kChi, kPhi))),
        v("general", disj(kPhi, conj_each("psis", kElem)), conj_each("psis", disj(kPhi, kElem))),
        v("general-mirror", disj(conj_each("psis", kElem), kPhi),
          conj_each("psis", disj(kElem, kPhi)))}});
  rules.push_back({"commutativity-and", "Commutativity", {v("base", conj(kPhi, kPsi), conj(kPsi, kPhi))}});
  rules.push_back({"commutativity-or", "Commutativity", {v("base", disj(kPhi, kPsi), disj(kPsi, kPhi))}});
  rules.push_back({"complement-or", "Complement",
                   {v("base", disj(kPhi, neg(kPhi)), P::top()),
                    v("mirror", disj(neg(kPhi), kPhi), P::top())}});
  rules.push_back({"complement-and", "Complement",
                   {v("base", conj(kPhi, neg(kPhi)), P::bottom()),
                    v("mirror", conj(neg(kPhi), kPhi), P::bottom())}});
  rules.push_back({"true-and", "True/False", {v("base", conj(kPhi, P::top()), kPhi),
                                              v("mirror", conj(P::top(), kPhi), kPhi)}});
  rules.push_back({"false-or", "True/False", {v("base", disj(kPhi, P::bottom()), kPhi),
                                              v("mirror", disj(P::bottom(), kPhi), kPhi)}});
  rules.push_back({"true-or", "True/False", {v("base", disj(kPhi, P::top()), P::top()),
                                             v("mirror", disj(P::top(), kPhi), P::top())}});
  rules.push_back({"false-and", "True/False", {v("base", conj(kPhi, P::bottom()), P::bottom()),
                                               v("mirror", conj(P::bottom(), kPhi), P::bottom())}});
  rules.push_back({"not-true", "True/False", {v("base", neg(P::top()), P::bottom())}});
  rules.push_back({"not-false", "True/False", {v("base", neg(P::bottom()), P::top())}});
  return rules;
}

Bindings ground(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  Bindings b;
  for (const auto& [k, text] : pairs) b.single.emplace(k, parse(text));
  return b;
}

std::vector<BuggyRule> build_buggy() {
  std::vector<BuggyRule> rules;
  rules.push_back({"demorgan-keeps-connective-or",
                   {v("base", neg(disj(kPhi, kPsi)), disj(neg(kPhi), neg(kPsi))),
                    v("general", neg(disj_each("phis", kElem)), disj_each("phis", neg(kElem)))},
                   "When applying DeMorgan's rule, a disjunction is transformed into a conjunction.",
                   ground({{"phi", "p"}, {"psi", "q"}})});
  rules.push_back({"demorgan-keeps-connective-and",
                   {v("base", neg(conj(kPhi, kPsi)), conj(neg(kPhi), neg(kPsi))),
                    v("general", neg(conj_each("phis", kElem)), conj_each("phis", neg(kElem)))},
                   "When applying DeMorgan's rule, a conjunction is transformed into a disjunction.",
                   ground({{"phi", "p"}, {"psi", "q"}})});
  rules.push_back({"complement-of-compound",
                   {v("base", conj(disj(kPhi, kPsi), disj(neg(kPhi), neg(kPsi))), P::bottom()),
                    v("mirror", conj(disj(neg(kPhi), neg(kPsi)), disj(kPhi, kPsi)), P::bottom())},
                   "This is not a contradiction: ~{phi} \\/ ~{psi} is not the negation of "
                   "{phi} \\/ {psi}. Only a formula and its own negation combine to F.",
                   ground({{"phi", "p"}, {"psi", "q"}})});
  rules.push_back({"demorgan-unnegated-operands",
                   {v("and", neg(conj(kPhi, kPsi)), disj(kPhi, kPsi)),
                    v("or", neg(disj(kPhi, kPsi)), conj(kPhi, kPsi))},
                   "When applying DeMorgan's rule, every operand must be negated.",
                   ground({{"phi", "p"}, {"psi", "q"}})});
  rules.push_back({"implication-wrong-negation",
                   {v("base", P::implication(kPhi, kPsi), disj(kPhi, neg(kPsi)))},
                   "An implication {phi} -> {psi} becomes ~{phi} \\/ {psi}: the negation belongs "
                   "to the left-hand side.",
                   ground({{"phi", "p"}, {"psi", "q"}})});
  rules.push_back(
      {"distribution-dropped-operand",
       {v("and-over-or", conj(kPhi, disj(kPsi, kChi)), disj(conj(kPhi, kPsi), kChi)),
        v("and-over-or-mirror", conj(disj(kPsi, kChi), kPhi), disj(kPsi, conj(kChi, kPhi))),
        v("or-over-and", disj(kPhi, conj(kPsi, kChi)), conj(disj(kPhi, kPsi), kChi)),
        v("or-over-and-mirror", disj(conj(kPsi, kChi), kPhi), conj(kPsi, disj(kChi, kPhi)))},
       "When applying distribution, {phi} has to be combined with every operand.",
       ground({{"phi", "p"}, {"psi", "q"}, {"chi", "r"}})});
  rules.push_back({"absorption-wrong-side",
                   {v("or", disj(kPhi, conj(kPhi, kPsi)), conj(kPhi, kPsi)),
                    v("and", conj(kPhi, disj(kPhi, kPsi)), disj(kPhi, kPsi))},
                   "Absorption keeps the shared operand {phi}; the compound operand disappears.",
                   ground({{"phi", "p"}, {"psi", "q"}})});
  rules.push_back({"double-negation-removes-one",
                   {v("base", neg(neg(kPhi)), neg(kPhi))},
                   "Double negation removes both negations: ~~{phi} is equivalent to {phi}.",
                   ground({{"phi", "p"}})});
  rules.push_back({"idempotency-on-different-operands",
                   {v("or-keep-left", disj(kPhi, kPsi), kPhi), v("or-keep-right", disj(kPhi, kPsi), kPsi),
                    v("and-keep-left", conj(kPhi, kPsi), kPhi), v("and-keep-right", conj(kPhi, kPsi), kPsi)},
                   "Idempotency only removes an operand that is identical to the one next to it.",
                   ground({{"phi", "p"}, {"psi", "q"}})});
  return rules;
}

std::string schema_of(const RuleVariant& v, std::string_view arrow) {
  return v.lhs.text() + " " + std::string(arrow) + " " + v.rhs.text();
}

}  // namespace

const RuleVariant* Rule::variant(std::string_view id) const {
  for (const auto& v : variants) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

std::string Rule::schema() const { return schema_of(variants.front(), "<=>"); }

std::string BuggyRule::schema() const { return schema_of(variants.front(), "~>"); }

const std::vector<Rule>& standard_rules() {
  static const std::vector<Rule> rules = build_standard();
  return rules;
}

const std::vector<BuggyRule>& buggy_rules() {
  static const std::vector<BuggyRule> rules = build_buggy();
  return rules;
}

const Rule* find_rule(std::string_view id) {
  for (const auto& r : standard_rules()) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const BuggyRule* find_buggy_rule(std::string_view id) {
  for (const auto& r : buggy_rules()) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

namespace {

std::optional<Formula> try_instantiate(const Pattern& p, const Bindings& b) {
  try {
    return instantiate(p, b);
  } catch (const UnboundMeta&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<RuleApplication> apply_all(const Rule& rule, const RuleVariant& variant,
                                       Orientation orientation, const Formula& f,
                                       const Position& pos, const Bindings& extra) {
  if (orientation == Orientation::RightToLeft && !rule.bidirectional) return {};
  const Pattern& from = orientation == Orientation::LeftToRight ? variant.lhs : variant.rhs;
  const Pattern& to = orientation == Orientation::LeftToRight ? variant.rhs : variant.lhs;
  if (!may_match_at(from, f, pos)) return {};
  Formula sub = subformula_at(f, pos);
  std::vector<RuleApplication> out;
  for (const auto& b : match(from, sub, extra)) {
    auto replacement = try_instantiate(to, b);
    if (!replacement) continue;
    Formula result = replace_at(f, pos, *replacement);
    bool seen = std::any_of(out.begin(), out.end(),
                            [&](const RuleApplication& a) { return a.after == result; });
    if (!seen) out.push_back({rule.id, variant.id, pos, orientation, f, result});
  }
  return out;
}

std::optional<Formula> apply(const Rule& rule, std::string_view variant_id, Orientation orientation,
                             const Formula& f, const Position& pos, const Bindings& extra) {
  const RuleVariant* var = rule.variant(variant_id);
  if (var == nullptr) throw std::invalid_argument("unknown variant '" + std::string(variant_id) + "'");
  auto all = apply_all(rule, *var, orientation, f, pos, extra);
  if (all.empty()) return std::nullopt;
  return all.front().after;
}

std::optional<Formula> extract_replacement(const Formula& before, const Position& pos,
                                           const Formula& after) {
  if (pos.path.empty() && !pos.span) return after;
  std::vector<std::size_t> container_path;
  std::size_t start = 0;
  std::size_t len = 1;
  if (pos.span) {
    container_path = pos.path;
    start = pos.span->start;
    len = pos.span->length;
  } else {
    container_path.assign(pos.path.begin(), pos.path.end() - 1);
    start = pos.path.back();
  }
  const Formula* b = &before;
  const Formula* a = &after;
  for (std::size_t idx : container_path) {
    if (b->kind() != a->kind() || b->arity() != a->arity() || idx >= b->arity()) return std::nullopt;
    for (std::size_t j = 0; j < b->arity(); ++j) {
      if (j != idx && b->operands()[j] != a->operands()[j]) return std::nullopt;
    }
    b = &b->operands()[idx];
    a = &a->operands()[idx];
  }
  if (pos.span && len == b->arity()) {
    // A span covering the whole node is the node itself.
    return extract_replacement(before, Position{pos.path, std::nullopt}, after);
  }
  if (b->kind() != a->kind()) return std::nullopt;
  if (!b->is_nary()) {
    if (b->arity() != a->arity()) return std::nullopt;
    for (std::size_t j = 0; j < b->arity(); ++j) {
      if (j != start && b->operands()[j] != a->operands()[j]) return std::nullopt;
    }
    return a->operands()[start];
  }
  const std::size_t k = b->arity();
  const std::size_t suffix = k - start - len;
  if (a->arity() < start + suffix + 1) return std::nullopt;
  auto bo = b->operands();
  auto ao = a->operands();
  for (std::size_t j = 0; j < start; ++j) {
    if (bo[j] != ao[j]) return std::nullopt;
  }
  for (std::size_t j = 0; j < suffix; ++j) {
    if (bo[k - 1 - j] != ao[a->arity() - 1 - j]) return std::nullopt;
  }
  std::vector<Formula> middle(ao.begin() + static_cast<std::ptrdiff_t>(start),
                              ao.end() - static_cast<std::ptrdiff_t>(suffix));
  return Formula::nary(b->kind(), std::move(middle));
}

std::vector<BuggyMatch> match_buggy(const Formula& before, const Formula& after) {
  std::vector<BuggyMatch> out;
  for (const auto& pos : positions(before)) {
    auto replacement = extract_replacement(before, pos, after);
    if (!replacement) continue;
    Formula sub = subformula_at(before, pos);
    for (const auto& rule : buggy_rules()) {
      bool found = false;
      for (const auto& var : rule.variants) {
        for (const auto& b : match(var.lhs, sub)) {
          for (const auto& b2 : match(var.rhs, *replacement, b)) {
            auto produced = try_instantiate(var.rhs, b2);
            if (produced && replace_at(before, pos, *produced) == after) {
              out.push_back({&rule, var.id, pos, b2});
              found = true;
              break;
            }
          }
          if (found) break;
        }
        if (found) break;
      }
    }
  }
  return out;
}

std::string BuggyMatch::message() const {
  std::string text = rule->message;
  for (const auto& [name, value] : bindings.single) {
    std::string shown = print(value);
    if (!value.is_literal() && !value.is_constant()) shown = "(" + shown + ")";
    const std::string key = "{" + name + "}";
    for (auto at = text.find(key); at != std::string::npos; at = text.find(key, at + shown.size())) {
      text.replace(at, key.size(), shown);
    }
  }
  return text;
}

std::vector<RuleSheetEntry> rule_sheet() {
  std::vector<RuleSheetEntry> out;
  for (const auto& r : standard_rules()) {
    RuleSheetEntry e{r.id, r.name, r.schema(), {}};
    for (const auto& var : r.variants) e.variants.push_back(schema_of(var, "<=>"));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace logex
