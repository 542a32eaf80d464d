#include "chang/errors.hpp"
#include "chang/expression.hpp"
#include "chang/invariants.hpp"
#include "chang/matrix.hpp"

#include <doctest.h>

using namespace chang;

namespace {
std::string problem_path(const std::string& name) { return data_directory() + "/matrices/" + name + ".json"; }
}  // namespace

TEST_CASE("bits are idempotent and coefficients reduce") {
    Poly k = Poly::bit(0);
    CHECK(k * k == k);
    CHECK((k + k).reduced(2).is_zero());
    CHECK((k + Poly::constant(3)).reduced(2) == k + Poly::constant(1));
    CHECK((k * Poly::bit(1)).substitute(0b11, 0b01).is_zero());
    CHECK((k * Poly::bit(1)).substitute(0b11, 0b11).as_constant() == 1);
    CHECK_FALSE(k.as_constant());
}

TEST_CASE("composites") {
    MatrixEngine e;
    Elementary s3 = sphere(3), s4 = sphere(4), m = moore(2, 1, 3);
    // the pinch kills the bottom inclusion
    CHECK(e.compose(e.parse("ηq", m, s3), e.parse("iη", s4, m)).is_zero());
    // η has order two
    CHECK(e.compose(e.parse("2", s3, s3), e.parse("η", s4, s3)).is_zero());
    // the extension of η restricts to η on the bottom cell
    Elementary m7 = moore(2, 1, 7), s6 = sphere(6), s7 = sphere(7);
    CHECK(e.compose(e.parse("η", m7, s6), e.parse("i", s7, m7)) == e.parse("η", s7, s6));
    // identity
    FormalMorphism x = e.parse("iη", s4, m);
    CHECK(e.compose(e.parse("1", m, m), x) == x);
}

TEST_CASE("a pair with no relation is reported") {
    RelationTable empty;
    MatrixEngine e(default_hom_table(), empty);
    Elementary s7 = sphere(7), s8 = sphere(8), s9 = sphere(9);
    CHECK_THROWS_AS(e.compose(e.parse("η", s8, s7), e.parse("η", s9, s8)), UnknownComposition);
}

TEST_CASE("group arithmetic wraps at the order") {
    MatrixEngine e;
    Elementary m = moore(2, 1, 3);
    FormalMorphism one = e.parse("1", m, m);
    FormalMorphism four = e.scale(one, Poly::constant(4));
    CHECK(four.is_zero());
    CHECK(e.add(one, e.negate(one)).is_zero());
    CHECK(e.to_string(e.parse("2", m, m)) == "2");
}

TEST_CASE("steps print and parse back") {
    for (const char* text : {"-r_2", "-c_1", "η r_1 + r_2", "2 c_1 + c_3", "c_2(-B(χ) - (κ+κ')iηq) + c_1",
                             "[r == u] c_1(1 + κiηq) + c_2", "3 r_1 + r_2"}) {
        TransformStep s = parse_step(text);
        CHECK_MESSAGE(parse_step(to_string(s)) == s, text);
        CHECK_MESSAGE(parse_step(to_json(s)) == s, text);
    }
    CHECK(parse_step("-r_2").kind == TransformStep::Kind::NegateRow);
    CHECK(parse_step("2 c_1 + c_3").kind == TransformStep::Kind::ScaleAddCol);
    CHECK(parse_step("c_1(i) + c_3").kind == TransformStep::Kind::ColCompose);
    CHECK(parse_script("# note\n\n-r_1\n-c_2\n").size() == 2);
    CHECK_THROWS(parse_step("r_1 r_2"));
}

TEST_CASE("every scripted step is undone by its inverse") {
    MatrixProblem p = load_problem(problem_path("ceta_cfull_skeleton"));
    MatrixEngine e;
    FormalMatrix m = instantiate(e, p);
    for (const auto& s : p.script) CHECK(e.apply_step(e.apply_step(m, s), inverse(s)) == m);
    TransformStep neg = parse_step("-r_1");
    CHECK(e.apply_step(e.apply_step(m, neg), neg) == m);
    CHECK(e.apply_step(m, inverse(inverse(p.script.front()))) == e.apply_step(m, p.script.front()));
}

TEST_CASE("predicated steps are skipped when false") {
    MatrixProblem p = load_problem(problem_path("ceta_cfull_skeleton"));
    MatrixEngine e;
    FormalMatrix m = instantiate(e, p);
    std::vector<TransformStep> script{parse_step("[r == 99] -r_1")};
    CHECK(e.run_script(m, script) == m);
    script = {parse_step("[r == 2] -r_1")};
    CHECK(e.run_script(m, script) == e.apply_step(m, script.front()));
}

TEST_CASE("fixing bits commutes with replay") {
    MatrixProblem p = load_problem(problem_path("cbot_cfull_skeleton_r_gt_u"));
    MatrixEngine e;
    FormalMatrix r = e.run_script(instantiate(e, p), p.script);
    for (int k = 0; k < 2; ++k)
        for (int k2 = 0; k2 < 2; ++k2) {
            std::map<std::string, int> vals{{"κ", k}, {"κ'", k2}};
            MatrixEngine f;
            f.fix_bits(vals);
            CHECK(f.run_script(instantiate(f, p), p.script) == e.substitute(r, vals));
        }
}

TEST_CASE("constraints are enforced") {
    MatrixProblem p = load_problem(problem_path("cbot_cfull_skeleton_r_gt_u"));
    p.params["r"] = p.params["u"];
    MatrixEngine e;
    CHECK_THROWS_AS(instantiate(e, p), std::invalid_argument);
}

TEST_CASE("placeholders") {
    CHECK(fill_placeholders("M(2^{r},{s+3})", {{"r", 2}, {"s", 4}}) == "M(2^2,7)");
    CHECK(fill_placeholders("C({min(r,s)},9,{max(r,s)})", {{"r", 3}, {"s", 1}}) == "C(1,9,3)");
}

TEST_CASE("cones of one-entry matrices") {
    MatrixEngine e;
    Elementary s3 = sphere(3);
    ConeSplit deg = e.split_cone(e.make_matrix({s3}, {s3}, {{"4"}}));
    CHECK(deg.pieces == Wedge(moore(2, 2, 3)));
    ConeSplit unit = e.split_cone(e.make_matrix({s3}, {s3}, {{"-1"}}));
    CHECK(unit.pieces.empty());
    CHECK(unit.complete());
    ConeSplit eta = e.split_cone(e.make_matrix({s3}, {sphere(4)}, {{"η"}}));
    CHECK(eta.pieces == Wedge(ceta(5)));
    GradedGroup h = e.cone_homology(e.make_matrix({s3}, {s3}, {{"4"}}));
    CHECK(h == integral_homology(moore(2, 2, 3)));
}

TEST_CASE("rendering lines up the columns") {
    MatrixEngine e;
    FormalMatrix m = e.make_matrix({sphere(3)}, {sphere(4), sphere(3)}, {{"η", "2"}});
    std::string out = e.render(m);
    CHECK(out.find("| S(4) | S(3)") != std::string::npos);
    CHECK(out.find("| η    | 2") != std::string::npos);
}
