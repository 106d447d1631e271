#include "logex/formula.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace logex {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::make(Connective kind, std::string name, std::vector<Formula> children) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->hash = mix(static_cast<std::size_t>(kind) + 1, std::hash<std::string>{}(name));
  for (const auto& c : children) {
    node->hash = mix(node->hash, c.hash());
    node->size += c.size();
  }
  node->name = std::move(name);
  node->children = std::move(children);
  return Formula(std::move(node));
}

Formula Formula::atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("atom name must not be empty");
  return make(Connective::Atom, std::move(name), {});
}

Formula Formula::truth() {
  static const Formula t = make(Connective::True, "", {});
  return t;
}

Formula Formula::falsity() {
  static const Formula f = make(Connective::False, "", {});
  return f;
}

Formula Formula::negation(Formula child) {
  std::vector<Formula> c;
  c.push_back(std::move(child));
  return make(Connective::Not, "", std::move(c));
}

Formula Formula::nary(Connective kind, std::vector<Formula> operands) {
  if (kind != Connective::And && kind != Connective::Or) {
    throw std::invalid_argument("nary requires And or Or");
  }
  if (operands.empty()) throw std::invalid_argument("n-ary node needs an operand");
  std::vector<Formula> flat;
  flat.reserve(operands.size());
  for (auto& op : operands) {
    if (op.kind() == kind) {
      flat.insert(flat.end(), op.operands().begin(), op.operands().end());
    } else {
      flat.push_back(std::move(op));
    }
  }
  if (flat.size() == 1) return flat.front();
  return make(kind, "", std::move(flat));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  std::vector<Formula> c;
  c.push_back(std::move(lhs));
  c.push_back(std::move(rhs));
  return make(Connective::Implies, "", std::move(c));
}

Formula Formula::biconditional(Formula lhs, Formula rhs) {
  std::vector<Formula> c;
  c.push_back(std::move(lhs));
  c.push_back(std::move(rhs));
  return make(Connective::Iff, "", std::move(c));
}

Formula Formula::rebuild(Connective kind, std::vector<Formula> children) {
  switch (kind) {
    case Connective::Not:
      return negation(std::move(children.at(0)));
    case Connective::And:
    case Connective::Or:
      return nary(kind, std::move(children));
    case Connective::Implies:
      return implication(std::move(children.at(0)), std::move(children.at(1)));
    case Connective::Iff:
      return biconditional(std::move(children.at(0)), std::move(children.at(1)));
    default:
      throw std::invalid_argument("rebuild on a leaf");
  }
}

bool Formula::is_literal() const {
  return is(Connective::Atom) || (is(Connective::Not) && operand(0).is(Connective::Atom));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  if (a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!(a.node_->children[i] == b.node_->children[i])) return false;
  }
  return true;
}

std::vector<std::string> atoms(const Formula& f) {
  std::set<std::string> names;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.is(Connective::Atom)) names.insert(g.name());
    for (const auto& c : g.operands()) walk(c);
  };
  walk(f);
  return {names.begin(), names.end()};
}

std::string to_string(const Position& pos) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < pos.path.size(); ++i) {
    if (i) os << ',';
    os << pos.path[i];
  }
  os << ']';
  if (pos.span) os << '{' << pos.span->start << '+' << pos.span->length << '}';
  return os.str();
}

namespace {

const Formula& node_at(const Formula& f, const std::vector<std::size_t>& path) {
  const Formula* cur = &f;
  for (std::size_t idx : path) {
    if (idx >= cur->arity()) throw InvalidPosition("path index out of range: " + std::to_string(idx));
    cur = &cur->operands()[idx];
  }
  return *cur;
}

void check_span(const Formula& node, const Span& s) {
  if (!node.is_nary()) throw InvalidPosition("span requires an And/Or node");
  if (s.length == 0 || s.start + s.length > node.arity()) throw InvalidPosition("span out of range");
}

// Replaces operands [start, start+len) of `node` with `g` (spliced when g
// shares the connective) and rebuilds.
Formula splice(const Formula& node, std::size_t start, std::size_t len, const Formula& g) {
  auto ops = node.operands();
  std::vector<Formula> out(ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(start));
  out.push_back(g);
  out.insert(out.end(), ops.begin() + static_cast<std::ptrdiff_t>(start + len), ops.end());
  return Formula::rebuild(node.kind(), std::move(out));
}

Formula replace_rec(const Formula& cur, const Position& pos, std::size_t depth, const Formula& g) {
  if (depth == pos.path.size()) {
    if (!pos.span) return g;
    check_span(cur, *pos.span);
    if (pos.span->length == cur.arity()) return g;
    return splice(cur, pos.span->start, pos.span->length, g);
  }
  std::size_t idx = pos.path[depth];
  if (idx >= cur.arity()) throw InvalidPosition("path index out of range: " + std::to_string(idx));
  Formula child = replace_rec(cur.operands()[idx], pos, depth + 1, g);
  if (cur.is_nary()) return splice(cur, idx, 1, child);
  std::vector<Formula> children(cur.operands().begin(), cur.operands().end());
  children[idx] = std::move(child);
  return Formula::rebuild(cur.kind(), std::move(children));
}

}  // namespace

Formula subformula_at(const Formula& f, const Position& pos) {
  const Formula& node = node_at(f, pos.path);
  if (!pos.span) return node;
  check_span(node, *pos.span);
  auto ops = node.operands().subspan(pos.span->start, pos.span->length);
  return Formula::nary(node.kind(), {ops.begin(), ops.end()});
}

Formula replace_at(const Formula& f, const Position& pos, const Formula& g) {
  return replace_rec(f, pos, 0, g);
}

bool is_valid(const Formula& f, const Position& pos) {
  try {
    (void)subformula_at(f, pos);
    return true;
  } catch (const InvalidPosition&) {
    return false;
  }
}

std::vector<Position> positions(const Formula& f) {
  std::vector<Position> out;
  std::deque<std::pair<const Formula*, std::vector<std::size_t>>> queue;
  queue.emplace_back(&f, std::vector<std::size_t>{});
  while (!queue.empty()) {
    auto [node, path] = std::move(queue.front());
    queue.pop_front();
    out.push_back(Position{path, std::nullopt});
    std::size_t k = node->arity();
    if (node->is_nary() && k > 2) {
      for (std::size_t len = k - 1; len >= 2; --len) {
        for (std::size_t start = 0; start + len <= k; ++start) {
          out.push_back(Position{path, Span{start, len}});
        }
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      auto child_path = path;
      child_path.push_back(i);
      queue.emplace_back(&node->operands()[i], std::move(child_path));
    }
  }
  return out;
}

}  // namespace logex
