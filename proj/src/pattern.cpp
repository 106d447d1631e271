#include "logex/pattern.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

namespace logex {

Pattern Pattern::meta(std::string name) {
  Pattern p;
  p.kind_ = Kind::Meta;
  p.name_ = std::move(name);
  return p;
}

Pattern Pattern::top() {
  Pattern p;
  p.kind_ = Kind::True;
  return p;
}

Pattern Pattern::bottom() {
  Pattern p;
  p.kind_ = Kind::False;
  return p;
}

Pattern Pattern::negation(Pattern child) {
  Pattern p;
  p.kind_ = Kind::Not;
  p.children_.push_back(std::move(child));
  return p;
}

Pattern Pattern::conj(std::vector<Pattern> ops) {
  Pattern p;
  p.kind_ = Kind::And;
  p.children_ = std::move(ops);
  if (p.children_.empty() || (p.children_.size() == 1 && p.children_[0].kind_ != Kind::Each)) {
    throw std::invalid_argument("conjunction pattern needs two operands or one each()");
  }
  return p;
}

Pattern Pattern::disj(std::vector<Pattern> ops) {
  Pattern p;
  p.kind_ = Kind::Or;
  p.children_ = std::move(ops);
  if (p.children_.empty() || (p.children_.size() == 1 && p.children_[0].kind_ != Kind::Each)) {
    throw std::invalid_argument("disjunction pattern needs two operands or one each()");
  }
  return p;
}

Pattern Pattern::implication(Pattern lhs, Pattern rhs) {
  Pattern p;
  p.kind_ = Kind::Implies;
  p.children_.push_back(std::move(lhs));
  p.children_.push_back(std::move(rhs));
  return p;
}

Pattern Pattern::biconditional(Pattern lhs, Pattern rhs) {
  Pattern p;
  p.kind_ = Kind::Iff;
  p.children_.push_back(std::move(lhs));
  p.children_.push_back(std::move(rhs));
  return p;
}

Pattern Pattern::each(std::string list, std::string element, Pattern body) {
  Pattern p;
  p.kind_ = Kind::Each;
  p.name_ = std::move(list);
  p.element_ = std::move(element);
  p.children_.push_back(std::move(body));
  return p;
}

std::set<std::string> Pattern::metas() const {
  std::set<std::string> out;
  std::function<void(const Pattern&, const std::string&)> walk = [&](const Pattern& p,
                                                                     const std::string& local) {
    if (p.kind_ == Kind::Meta && p.name_ != local) out.insert(p.name_);
    if (p.kind_ == Kind::Each) {
      out.insert(p.name_);
      walk(p.children_[0], p.element_);
      return;
    }
    for (const auto& c : p.children_) walk(c, local);
  };
  walk(*this, "");
  return out;
}

namespace {

int precedence(Pattern::Kind k) {
  switch (k) {
    case Pattern::Kind::Iff: return 1;
    case Pattern::Kind::Implies: return 2;
    case Pattern::Kind::Or: return 3;
    case Pattern::Kind::And: return 4;
    case Pattern::Kind::Not: return 5;
    default: return 6;
  }
}

std::string render(const Pattern& p, const std::map<std::string, std::string>& rename);

std::string render_child(const Pattern& p, int paren_at_or_below,
                         const std::map<std::string, std::string>& rename) {
  std::string s = render(p, rename);
  if (precedence(p.kind()) <= paren_at_or_below) return "(" + s + ")";
  return s;
}

std::string render(const Pattern& p, const std::map<std::string, std::string>& rename) {
  using K = Pattern::Kind;
  switch (p.kind()) {
    case K::Meta: {
      auto it = rename.find(p.name());
      return it == rename.end() ? p.name() : it->second;
    }
    case K::True: return "T";
    case K::False: return "F";
    case K::Not: return "~" + render_child(p.children()[0], 4, rename);
    case K::And:
    case K::Or: {
      std::string sep = p.kind() == K::And ? " /\\ " : " \\/ ";
      if (p.children().size() == 1) {
        const Pattern& e = p.children()[0];
        auto first = rename;
        first[e.element()] = e.name() + "_1";
        auto last = rename;
        last[e.element()] = e.name() + "_n";
        return render_child(e.children()[0], 4, first) + sep + "..." + sep +
               render_child(e.children()[0], 4, last);
      }
      std::string out;
      for (std::size_t i = 0; i < p.children().size(); ++i) {
        if (i) out += sep;
        out += render_child(p.children()[i], 4, rename);
      }
      return out;
    }
    case K::Implies:
      return render_child(p.children()[0], 2, rename) + " -> " +
             render_child(p.children()[1], 1, rename);
    case K::Iff:
      return render_child(p.children()[0], 1, rename) + " <-> " +
             render_child(p.children()[1], 1, rename);
    case K::Each:
      return render(p.children()[0], rename);
  }
  return "";
}

void match_into(const Pattern& p, const Formula& f, const Bindings& b, std::vector<Bindings>& out);

void match_each(const Pattern& each, std::span<const Formula> ops, std::size_t j, Bindings b,
                std::vector<Formula>& collected, std::vector<Bindings>& out) {
  const std::string& list = each.name();
  const std::string& elem = each.element();
  if (j == ops.size()) {
    if (!b.lists.contains(list)) b.lists.emplace(list, collected);
    out.push_back(std::move(b));
    return;
  }
  Bindings seed = b;
  seed.single.erase(elem);
  if (auto it = b.lists.find(list); it != b.lists.end()) {
    if (it->second.size() != ops.size()) return;
    seed.single.insert_or_assign(elem, it->second[j]);
  }
  std::vector<Bindings> partial;
  match_into(each.children()[0], ops[j], seed, partial);
  for (auto& pb : partial) {
    auto value = pb.single.at(elem);
    pb.single.erase(elem);
    collected.push_back(std::move(value));
    match_each(each, ops, j + 1, std::move(pb), collected, out);
    collected.pop_back();
  }
}

std::optional<Connective> connective_of(Pattern::Kind k) {
  switch (k) {
    case Pattern::Kind::True: return Connective::True;
    case Pattern::Kind::False: return Connective::False;
    case Pattern::Kind::Not: return Connective::Not;
    case Pattern::Kind::And: return Connective::And;
    case Pattern::Kind::Or: return Connective::Or;
    case Pattern::Kind::Implies: return Connective::Implies;
    case Pattern::Kind::Iff: return Connective::Iff;
    case Pattern::Kind::Meta:
    case Pattern::Kind::Each: return std::nullopt;
  }
  return std::nullopt;
}


// Operands a pattern takes in a group under `parent`, when that does not
// depend on the rest of the split: one, unless it is the parent's own
// connective (a group of two or more) or a metavariable.
std::optional<std::size_t> static_width(const Pattern& p, Connective parent) {
  auto c = connective_of(p.kind());
  if (!c || *c == parent) return std::nullopt;
  return 1;
}

// Same, also using the formula a metavariable is already bound to.
std::optional<std::size_t> bound_width(const Pattern& p, Connective parent, const Bindings& b) {
  if (p.kind() != Pattern::Kind::Meta) return static_width(p, parent);
  auto it = b.single.find(p.name());
  if (it == b.single.end()) return std::nullopt;
  return it->second.kind() == parent ? it->second.arity() : 1;
}

void match_groups(const std::vector<Pattern>& pats, std::size_t i, const Formula& node,
                  std::size_t start, const Bindings& b, std::vector<Bindings>& out) {
  const std::size_t m = pats.size();
  const std::size_t k = node.arity();
  const Connective parent = node.kind();
  auto ops = node.operands();
  auto group = [&](std::size_t from, std::size_t to) {
    if (to - from == 1) return ops[from];
    return Formula::nary(parent, {ops.begin() + static_cast<std::ptrdiff_t>(from),
                                  ops.begin() + static_cast<std::ptrdiff_t>(to)});
  };
  if (i + 1 == m) {
    if (auto w = bound_width(pats[i], parent, b); w && *w != k - start) return;
    match_into(pats[i], group(start, k), b, out);
    return;
  }
  // Split points that the widths already decide.
  std::size_t lo = start + 1;
  std::size_t hi = k - (m - 1 - i);
  if (auto w = bound_width(pats[i], parent, b)) lo = hi = start + *w;
  std::size_t tail = 0;
  bool tail_fixed = true;
  for (std::size_t j = i + 1; j < m && tail_fixed; ++j) {
    auto w = static_width(pats[j], parent);
    if (w) tail += *w; else tail_fixed = false;
  }
  if (tail_fixed) {
    // One split left. Match the fixed tail first: it usually binds the
    // metavariables this group must equal, which then rules it out cheaply.
    if (tail >= k - start) return;
    const std::size_t end = k - tail;
    if (end < lo || end > hi) return;
    std::vector<Bindings> cur{b};
    std::size_t off = end;
    for (std::size_t j = i + 1; j < m; ++j) {
      std::vector<Bindings> next;
      for (const auto& cb : cur) match_into(pats[j], ops[off], cb, next);
      cur = std::move(next);
      off += 1;
    }
    for (const auto& cb : cur) {
      if (auto w = bound_width(pats[i], parent, cb); w && *w != end - start) continue;
      match_into(pats[i], group(start, end), cb, out);
    }
    return;
  }
  for (std::size_t end = lo; end <= hi && end < k; ++end) {
    std::vector<Bindings> partial;
    match_into(pats[i], group(start, end), b, partial);
    for (const auto& pb : partial) match_groups(pats, i + 1, node, end, pb, out);
  }
}

void match_into(const Pattern& p, const Formula& f, const Bindings& b, std::vector<Bindings>& out) {
  using K = Pattern::Kind;
  switch (p.kind()) {
    case K::Meta: {
      auto it = b.single.find(p.name());
      if (it != b.single.end()) {
        if (it->second == f) out.push_back(b);
        return;
      }
      Bindings nb = b;
      nb.single.emplace(p.name(), f);
      out.push_back(std::move(nb));
      return;
    }
    case K::True:
      if (f.is(Connective::True)) out.push_back(b);
      return;
    case K::False:
      if (f.is(Connective::False)) out.push_back(b);
      return;
    case K::Not:
      if (f.is(Connective::Not)) match_into(p.children()[0], f.operand(0), b, out);
      return;
    case K::Implies:
    case K::Iff: {
      if (!f.is(p.kind() == K::Implies ? Connective::Implies : Connective::Iff)) return;
      std::vector<Bindings> first;
      match_into(p.children()[0], f.operand(0), b, first);
      for (const auto& fb : first) match_into(p.children()[1], f.operand(1), fb, out);
      return;
    }
    case K::And:
    case K::Or: {
      if (!f.is(p.kind() == K::And ? Connective::And : Connective::Or)) return;
      if (p.children().size() == 1) {
        std::vector<Formula> collected;
        match_each(p.children()[0], f.operands(), 0, b, collected, out);
        return;
      }
      if (f.arity() < p.children().size()) return;
      match_groups(p.children(), 0, f, 0, b, out);
      return;
    }
    case K::Each:
      throw std::logic_error("each() outside an n-ary pattern");
  }
}

void instantiate_into(const Pattern& p, const Bindings& b, std::vector<Formula>& out);

Formula instantiate_one(const Pattern& p, const Bindings& b) {
  using K = Pattern::Kind;
  switch (p.kind()) {
    case K::Meta: {
      auto it = b.single.find(p.name());
      if (it == b.single.end()) throw UnboundMeta(p.name());
      return it->second;
    }
    case K::True: return Formula::truth();
    case K::False: return Formula::falsity();
    case K::Not: return Formula::negation(instantiate_one(p.children()[0], b));
    case K::Implies:
      return Formula::implication(instantiate_one(p.children()[0], b),
                                  instantiate_one(p.children()[1], b));
    case K::Iff:
      return Formula::biconditional(instantiate_one(p.children()[0], b),
                                    instantiate_one(p.children()[1], b));
    case K::And:
    case K::Or: {
      std::vector<Formula> ops;
      for (const auto& c : p.children()) instantiate_into(c, b, ops);
      return Formula::nary(p.kind() == K::And ? Connective::And : Connective::Or, std::move(ops));
    }
    case K::Each:
      throw std::logic_error("each() outside an n-ary pattern");
  }
  throw std::logic_error("unreachable");
}

void instantiate_into(const Pattern& p, const Bindings& b, std::vector<Formula>& out) {
  if (p.kind() != Pattern::Kind::Each) {
    out.push_back(instantiate_one(p, b));
    return;
  }
  auto it = b.lists.find(p.name());
  if (it == b.lists.end()) throw UnboundMeta(p.name());
  for (const auto& elem : it->second) {
    Bindings eb = b;
    eb.single.insert_or_assign(p.element(), elem);
    out.push_back(instantiate_one(p.children()[0], eb));
  }
}

}  // namespace

std::string Pattern::text() const { return render(*this, {}); }

std::vector<Bindings> match(const Pattern& p, const Formula& f, const Bindings& seed) {
  std::vector<Bindings> out;
  match_into(p, f, seed, out);
  return out;
}

Formula instantiate(const Pattern& p, const Bindings& b) { return instantiate_one(p, b); }

namespace {


// An operand pattern of an n-ary pattern either absorbs a group of operands
// (its own connective equals the parent's) or matches exactly one operand.
bool operand_may_match(const Pattern& child, Connective parent, const Formula& operand) {
  auto c = connective_of(child.kind());
  if (!c || *c == parent) return true;
  return operand.kind() == *c;
}

}  // namespace

bool may_match_at(const Pattern& p, const Formula& f, const Position& pos) {
  const Formula* node = &f;
  for (std::size_t i : pos.path) {
    if (i >= node->arity()) return true;  // let the caller report the bad position
    node = &node->operands()[i];
  }
  if (pos.span && (!node->is_nary() || pos.span->start + pos.span->length > node->arity())) return true;
  auto want = connective_of(p.kind());
  if (!want) return true;
  if (node->kind() != *want) return false;
  if (p.kind() == Pattern::Kind::Not) {
    auto c = connective_of(p.children()[0].kind());
    return !c || node->operand(0).kind() == *c;
  }
  if (!node->is_nary()) return true;
  const auto& kids = p.children();
  if (kids.size() == 1 && kids[0].kind() == Pattern::Kind::Each) return true;
  std::size_t start = pos.span ? pos.span->start : 0;
  std::size_t len = pos.span ? pos.span->length : node->arity();
  if (len < kids.size()) return false;
  const auto& ops = node->operands();
  // phi /\ phi and the like: the span splits into equal chunks.
  bool repeated = std::all_of(kids.begin(), kids.end(), [&](const Pattern& k) {
    return k.kind() == Pattern::Kind::Meta && k.name() == kids.front().name();
  });
  if (repeated) {
    if (len % kids.size() != 0) return false;
    std::size_t chunk = len / kids.size();
    for (std::size_t j = chunk; j < len; ++j) {
      if (ops[start + j] != ops[start + j % chunk]) return false;
    }
    return true;
  }
  return operand_may_match(kids.front(), *want, ops[start]) &&
         operand_may_match(kids.back(), *want, ops[start + len - 1]);
}

std::vector<Span> candidate_spans(const Pattern& p, const Formula& node) {
  std::vector<Span> out;
  const std::size_t k = node.arity();
  auto want = connective_of(p.kind());
  if (!node.is_nary() || (want && *want != node.kind())) return out;
  auto all = [&] {
    out.push_back(Span{0, k});
    for (std::size_t len = k - 1; len >= 2; --len) {
      for (std::size_t start = 0; start + len <= k; ++start) out.push_back(Span{start, len});
    }
    return out;
  };
  if (!want || p.children().size() != 2) return all();
  const Connective parent = node.kind();
  const Pattern& a = p.children()[0];
  const Pattern& b = p.children()[1];
  const auto& ops = node.operands();
  // Whether operands [from, from + w) form the formula bound to `meta`.
  auto group_is = [&](const Pattern& meta, const Bindings& bb, std::size_t from, std::size_t w) {
    if (meta.kind() != Pattern::Kind::Meta) return true;
    auto it = bb.single.find(meta.name());
    if (it == bb.single.end()) return true;
    if (w == 1) return ops[from] == it->second;
    for (std::size_t j = 0; j < w; ++j) {
      if (ops[from + j] != it->second.operands()[j]) return false;
    }
    return true;
  };
  if (static_width(b, parent)) {
    // b takes the last operand; its bindings may fix a's width
    for (std::size_t e = 1; e < k; ++e) {
      std::vector<Bindings> bs;
      match_into(b, ops[e], {}, bs);
      for (const auto& bb : bs) {
        if (auto w = bound_width(a, parent, bb)) {
          if (*w <= e && group_is(a, bb, e - *w, *w)) out.push_back(Span{e - *w, *w + 1});
        } else {
          for (std::size_t s0 = 0; s0 < e; ++s0) out.push_back(Span{s0, e - s0 + 1});
        }
      }
    }
    return out;
  }
  if (static_width(a, parent)) {
    for (std::size_t s0 = 0; s0 + 1 < k; ++s0) {
      std::vector<Bindings> as;
      match_into(a, ops[s0], {}, as);
      for (const auto& ab : as) {
        if (auto w = bound_width(b, parent, ab)) {
          if (s0 + 1 + *w <= k && group_is(b, ab, s0 + 1, *w)) out.push_back(Span{s0, *w + 1});
        } else {
          for (std::size_t e = s0 + 1; e < k; ++e) out.push_back(Span{s0, e - s0 + 1});
        }
      }
    }
    return out;
  }
  if (a.kind() == Pattern::Kind::Meta && b.kind() == Pattern::Kind::Meta && a.name() == b.name()) {
    for (std::size_t s0 = 0; s0 + 1 < k; ++s0) {
      for (std::size_t w = 1; s0 + 2 * w <= k; ++w) {
        bool same = true;
        for (std::size_t j = 0; j < w && same; ++j) same = ops[s0 + j] == ops[s0 + w + j];
        if (same) out.push_back(Span{s0, 2 * w});
      }
    }
    return out;
  }
  return all();
}

}  // namespace logex
