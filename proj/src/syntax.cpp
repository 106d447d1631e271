#include "logex/syntax.hpp"

#include <cctype>
#include <optional>
#include <ostream>
#include <vector>

namespace logex {

std::string SyntaxError::message() const {
  std::string msg = "syntax error at offset " + std::to_string(offset);
  if (!token.empty()) msg += " near '" + token + "'";
  msg += ": expected " + expected;
  if (!suggestion.empty()) msg += " (" + suggestion + ")";
  return msg;
}

namespace {

enum class Tok { Atom, True, False, Not, And, Or, Imp, Iff, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::Not: return "'~'";
    case Tok::And: return "'/\\'";
    case Tok::Or: return "'\\/'";
    case Tok::Imp: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::LParen: return "'('";
    default: return "the previous token";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  // Returns the token list or the first lexical error.
  std::variant<std::vector<Token>, SyntaxError> run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ >= text_.size()) break;
      std::size_t start = pos_;
      char c = text_[pos_];
      auto emit = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(text_.substr(start, len)), start});
        pos_ += len;
      };
      if (std::islower(static_cast<unsigned char>(c))) {
        std::size_t end = pos_ + 1;
        while (end < text_.size() && (std::islower(static_cast<unsigned char>(text_[end])) ||
                                      std::isdigit(static_cast<unsigned char>(text_[end])))) {
          ++end;
        }
        emit(Tok::Atom, end - pos_);
        continue;
      }
      if (c == 'T') { emit(Tok::True, 1); continue; }
      if (c == 'F') { emit(Tok::False, 1); continue; }
      if (c == '~') { emit(Tok::Not, 1); continue; }
      if (c == '(') { emit(Tok::LParen, 1); continue; }
      if (c == ')') { emit(Tok::RParen, 1); continue; }
      if (starts_with("/\\")) { emit(Tok::And, 2); continue; }
      if (starts_with("\\/")) { emit(Tok::Or, 2); continue; }
      if (starts_with("<->")) { emit(Tok::Iff, 3); continue; }
      if (starts_with("->")) { emit(Tok::Imp, 2); continue; }
      if (starts_with("\xC2\xAC")) { emit(Tok::Not, 2); continue; }       // ¬
      if (starts_with("\xE2\x88\xA7")) { emit(Tok::And, 3); continue; }   // ∧
      if (starts_with("\xE2\x88\xA8")) { emit(Tok::Or, 3); continue; }    // ∨
      if (starts_with("\xE2\x86\x92")) { emit(Tok::Imp, 3); continue; }   // →
      if (starts_with("\xE2\x86\x94")) { emit(Tok::Iff, 3); continue; }   // ↔
      return unknown(start);
    }
    out.push_back({Tok::End, "", text_.size()});
    return out;
  }

 private:
  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  SyntaxError unknown(std::size_t start) const {
    unsigned char c = static_cast<unsigned char>(text_[start]);
    std::size_t len = 1;
    if (c >= 0xC0) len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : 2;
    SyntaxError err{start, std::string(text_.substr(start, len)), "a formula or operator", ""};
    auto rest = text_.substr(start);
    if (c == '&') err.suggestion = "write conjunction as /\\";
    else if (c == '|') err.suggestion = "write disjunction as \\/";
    else if (c == '!' || c == '-') err.suggestion = rest.starts_with("->") ? "" : "write negation as ~ and implication as ->";
    else if (rest.starts_with("=>")) err.suggestion = "write implication as ->";
    else if (c == '=') err.suggestion = "write equivalence as <->";
    else if (c == '<') err.suggestion = "write equivalence as <->";
    else if (c == '/') err.suggestion = "conjunction is written /\\ (slash, backslash)";
    else if (c == '\\') err.suggestion = "disjunction is written \\/ (backslash, slash)";
    else if (std::isupper(c)) err.suggestion = "atoms are lowercase; only T and F are uppercase constants";
    else if (std::isdigit(c)) err.suggestion = "atoms must start with a lowercase letter";
    else if (c == '[' || c == '{') err.suggestion = "use round parentheses";
    else err.suggestion = "remove this character";
    return err;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParseResult run() {
    auto f = parse_iff();
    if (error_) return *error_;
    const Token& t = peek();
    if (t.kind != Tok::End) {
      if (t.kind == Tok::RParen) {
        fail({t.offset, t.text, "an operator or end of input", "this ')' has no matching '('"});
      } else if (t.kind == Tok::Atom || t.kind == Tok::True || t.kind == Tok::False ||
                 t.kind == Tok::LParen || t.kind == Tok::Not) {
        fail({t.offset, t.text, "an operator", "put /\\, \\/, -> or <-> between two formulas"});
      } else {
        fail({t.offset, t.text, "end of input", ""});
      }
      return *error_;
    }
    return *f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& advance() { return toks_[i_++]; }
  void fail(SyntaxError e) {
    if (!error_) error_ = std::move(e);
  }

  std::optional<Formula> parse_iff() {
    auto lhs = parse_imp();
    if (!lhs) return std::nullopt;
    if (peek().kind != Tok::Iff) return lhs;
    advance();
    auto rhs = parse_imp();
    if (!rhs) return std::nullopt;
    if (peek().kind == Tok::Iff) {
      fail({peek().offset, peek().text, "end of the equivalence",
            "<-> does not chain; add parentheses, e.g. (p <-> q) <-> r"});
      return std::nullopt;
    }
    return Formula::biconditional(std::move(*lhs), std::move(*rhs));
  }

  std::optional<Formula> parse_imp() {
    auto lhs = parse_or();
    if (!lhs) return std::nullopt;
    if (peek().kind != Tok::Imp) return lhs;
    advance();
    auto rhs = parse_imp();
    if (!rhs) return std::nullopt;
    return Formula::implication(std::move(*lhs), std::move(*rhs));
  }

  std::optional<Formula> parse_nary(Tok op, Connective kind, std::optional<Formula> (Parser::*next)()) {
    auto first = (this->*next)();
    if (!first) return std::nullopt;
    std::vector<Formula> ops{std::move(*first)};
    while (peek().kind == op) {
      advance();
      auto more = (this->*next)();
      if (!more) return std::nullopt;
      ops.push_back(std::move(*more));
    }
    return Formula::nary(kind, std::move(ops));
  }

  std::optional<Formula> parse_or() { return parse_nary(Tok::Or, Connective::Or, &Parser::parse_and); }
  std::optional<Formula> parse_and() { return parse_nary(Tok::And, Connective::And, &Parser::parse_unary); }

  std::optional<Formula> parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: {
        advance();
        auto child = parse_unary();
        if (!child) return std::nullopt;
        return Formula::negation(std::move(*child));
      }
      case Tok::Atom:
        advance();
        return Formula::atom(t.text);
      case Tok::True:
        advance();
        return Formula::truth();
      case Tok::False:
        advance();
        return Formula::falsity();
      case Tok::LParen: {
        const Token& open = advance();
        auto inner = parse_iff();
        if (!inner) return std::nullopt;
        if (peek().kind != Tok::RParen) {
          if (peek().kind == Tok::End) {
            fail({open.offset, open.text, "')' to close this parenthesis",
                  "add a closing parenthesis at the end"});
          } else {
            fail({peek().offset, peek().text, "')'", "the '(' at offset " +
                                                         std::to_string(open.offset) +
                                                         " is still open"});
          }
          return std::nullopt;
        }
        advance();
        return inner;
      }
      default:
        missing_operand(t);
        return std::nullopt;
    }
  }

  void missing_operand(const Token& t) {
    if (t.kind == Tok::End) {
      if (i_ == 0) {
        fail({0, "", "a formula", "the input is empty"});
      } else {
        const Token& prev = toks_[i_ - 1];
        fail({prev.offset, prev.text, "a formula after " + describe(prev.kind),
              "complete the formula or remove the dangling operator"});
      }
      return;
    }
    if (t.kind == Tok::RParen) {
      fail({t.offset, t.text, "a formula before ')'", "parentheses must contain a formula"});
      return;
    }
    std::string hint = "a binary operator needs a formula on both sides";
    if (i_ > 0) {
      const Token& prev = toks_[i_ - 1];
      if (prev.kind != Tok::LParen) hint = "two operators in a row; a formula is missing after " + describe(prev.kind);
    }
    fail({t.offset, t.text, "a formula", hint});
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::optional<SyntaxError> error_;
};

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Connective::Iff: return 1;
    case Connective::Implies: return 2;
    case Connective::Or: return 3;
    case Connective::And: return 4;
    case Connective::Not: return 5;
    default: return 6;
  }
}

void print_rec(const Formula& f, std::string& out);

// Parenthesizes `f` when its precedence is at most `max_bare_paren`.
void print_child(const Formula& f, int paren_at_or_below, std::string& out) {
  if (precedence(f) <= paren_at_or_below) {
    out += '(';
    print_rec(f, out);
    out += ')';
  } else {
    print_rec(f, out);
  }
}

void print_rec(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::Atom: out += f.name(); break;
    case Connective::True: out += 'T'; break;
    case Connective::False: out += 'F'; break;
    case Connective::Not:
      out += '~';
      print_child(f.operand(0), 4, out);
      break;
    case Connective::And:
    case Connective::Or: {
      const char* sep = f.is(Connective::And) ? " /\\ " : " \\/ ";
      for (std::size_t i = 0; i < f.arity(); ++i) {
        if (i) out += sep;
        // Mixed conjunction/disjunction nesting is always bracketed.
        print_child(f.operand(i), 4, out);
      }
      break;
    }
    case Connective::Implies:
      print_child(f.operand(0), 2, out);
      out += " -> ";
      print_child(f.operand(1), 1, out);
      break;
    case Connective::Iff:
      print_child(f.operand(0), 1, out);
      out += " <-> ";
      print_child(f.operand(1), 1, out);
      break;
  }
}

}  // namespace

ParseResult try_parse(std::string_view text) {
  auto lexed = Lexer(text).run();
  if (auto* err = std::get_if<SyntaxError>(&lexed)) return *err;
  return Parser(std::get<std::vector<Token>>(std::move(lexed))).run();
}

Formula parse(std::string_view text) {
  auto r = try_parse(text);
  if (auto* err = std::get_if<SyntaxError>(&r)) throw ParseError(*err);
  return std::get<Formula>(std::move(r));
}

std::string print(const Formula& f) {
  std::string out;
  print_rec(f, out);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << print(f); }

}  // namespace logex
