#include <doctest.h>

#include <sstream>

#include "logex/syntax.hpp"
#include "support/gen.hpp"

using namespace logex;

namespace {

SyntaxError error_of(std::string_view text) {
  auto r = try_parse(text);
  REQUIRE(std::holds_alternative<SyntaxError>(r));
  return std::get<SyntaxError>(r);
}

}  // namespace

TEST_SUITE("syntax") {
  TEST_CASE("precedence: ~ binds tightest then /\\ then \\/ then -> then <->") {
    CHECK(parse("~p /\\ q \\/ r -> s <-> t") ==
          parse("((((~p) /\\ q) \\/ r) -> s) <-> t"));
    CHECK(parse("p -> q -> r") == parse("p -> (q -> r)"));
  }

  TEST_CASE("unicode connectives are accepted") {
    CHECK(parse("\xC2\xAC" "p \xE2\x88\xA7 q \xE2\x88\xA8 r \xE2\x86\x92 s \xE2\x86\x94 t") ==
          parse("~p /\\ q \\/ r -> s <-> t"));
  }

  TEST_CASE("constants and atom names") {
    CHECK(parse("T").is(Connective::True));
    CHECK(parse("F").is(Connective::False));
    CHECK(parse("x12").name() == "x12");
  }

  TEST_CASE("printer uses minimal parentheses") {
    CHECK(print(parse("(q /\\ ~r) \\/ q \\/ r")) == "(q /\\ ~r) \\/ q \\/ r");
    CHECK(print(parse("~(p \\/ q)")) == "~(p \\/ q)");
    CHECK(print(parse("(p -> q) -> r")) == "(p -> q) -> r");
    CHECK(print(parse("p -> (q -> r)")) == "p -> q -> r");
    std::ostringstream os;
    os << parse("~~p");
    CHECK(os.str() == "~~p");
  }

  TEST_CASE("<-> does not chain") {
    auto e = error_of("p <-> q <-> r");
    CHECK(e.offset == 8);
  }

  TEST_CASE("dangling operator reports its own offset") {
    auto e = error_of("p \\/ ~");
    CHECK(e.offset == 5);
    CHECK(e.expected == "a formula after '~'");
  }

  TEST_CASE("suggestions for common mistakes") {
    CHECK(error_of("p & q").suggestion.find("/\\") != std::string::npos);
    CHECK(error_of("p | q").suggestion.find("\\/") != std::string::npos);
    CHECK(error_of("p => q").suggestion.find("->") != std::string::npos);
    CHECK(error_of("P").suggestion.find("lowercase") != std::string::npos);
    CHECK(error_of("(p /\\ q").offset == 0);  // points at the unmatched paren
    CHECK(error_of("p q").expected == "an operator");
    CHECK(error_of("").offset == 0);
  }

  TEST_CASE("parse throws ParseError carrying the error") {
    try {
      parse("p /\\");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.detail().offset == 2);
    }
  }

  TEST_CASE("property: parse(print(f)) == f") {
    testgen::Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
      auto f = testgen::random_formula(rng, {5, 5, true, true});
      CHECK(parse(print(f)) == f);
    }
  }
}
