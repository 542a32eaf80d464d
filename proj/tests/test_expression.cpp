#include "chang/errors.hpp"
#include "chang/expression.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace chang;

TEST_CASE("smash binds tighter than wedge") {
    Expr e = parse_expression("S(3) + M(2^3,3) ^ C(2,5,1)");
    REQUIRE(e.op == Expr::Op::Wedge);
    REQUIRE(e.kids.size() == 2);
    CHECK(e.kids[1].op == Expr::Op::Smash);
    CHECK(e.kids[1].kids[0].leaf == moore(2, 3, 3));
    CHECK(e.kids[1].kids[1].leaf == cfull(2, 5, 1));
}

TEST_CASE("printing") {
    CHECK(print(parse_expression("M(8,3)")) == "M(2^3,3)");
    CHECK(print(parse_expression("(S(3)+S(4)) ^ Ceta(5)")) == "(S(3) v S(4))^Ceta(5)");
    CHECK(print(parse_expression("D(Cbot(2,5))")) == "D(Cbot(2,5))");
    CHECK(print(parse_expression("D( S(3) , 9)")) == "D(S(3),9)");
    CHECK(print(parse_expression("pt")) == "*");
}

TEST_CASE("evaluation") {
    CHECK(parse_wedge("D(Cbot(2,5))") == Wedge(ctop(5, 2)));
    CHECK(parse_wedge("susp(2, Ceta(5))") == Wedge(ceta(7)));
    CHECK(parse_wedge("S(3) v *") == Wedge(sphere(3)));
    CHECK(parse_elementary("M(2^2,3)") == moore(2, 2, 3));
    CHECK_THROWS_AS(parse_elementary("S(3) + S(4)"), ParseError);
    Evaluation ev = evaluate(parse_expression("M(2^2,3)^Cbot(3,5)"));
    CHECK(ev.branches.size() == 1);
}

TEST_CASE("diagnostics carry the offset") {
    try {
        parse_expression("S(2)");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 0);
    }
    try {
        parse_expression("S(3) + Q(4)");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 7);
    }
    CHECK_THROWS_AS(parse_expression("S(3"), ParseError);
    CHECK_THROWS_AS(parse_expression("S(3) S(4)"), ParseError);
    CHECK_THROWS_AS(parse_expression("M(6,3)"), ParseError);
    CHECK_THROWS_AS(parse_expression("Ceta(4)"), ParseError);
}

TEST_CASE("printing is a fixed point after one pass") {
    std::mt19937 gen(77);
    for (int i = 0; i < 300; ++i) {
        std::string t = testing_support::random_expression(gen, 3);
        std::string once = print(parse_expression(t));
        CHECK_MESSAGE(print(parse_expression(once)) == once, t);
    }
}
