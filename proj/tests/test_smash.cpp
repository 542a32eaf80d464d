#include "chang/errors.hpp"
#include "chang/invariants.hpp"
#include "chang/smash.hpp"

#include <doctest.h>

#include <algorithm>

using namespace chang;

TEST_CASE("a Moore space against a bottom Chang complex splits when its exponent is smaller") {
    auto [w, rule] = decompose_pair(moore(2, 2, 3), cbot(3, 5));
    CHECK(to_string(w) == "M(2^2,3)^Ceta(5) v M(2^2,7)");
    CHECK(rule == "moore-cbot/u<=r");
}

TEST_CASE("spheres suspend and odd primes do not meet Chang complexes") {
    CHECK(decompose_pair(sphere(4), cfull(1, 5, 2)).first == Wedge(cfull(1, 9, 2)));
    auto [w, rule] = decompose_pair(moore(3, 1, 3), cbot(2, 5));
    CHECK(integral_homology(w) == kunneth(integral_homology(moore(3, 1, 3)), integral_homology(cbot(2, 5))));
    CHECK(w.size() <= 1);
}

TEST_CASE("smash distributes over wedges and records every branch") {
    Wedge x = Wedge(sphere(3)) + Wedge(moore(2, 1, 3));
    Wedge y = Wedge(ceta(5));
    SmashResult r = smash_decompose(x, y);
    CHECK(r.branches.size() == 2);
    CHECK(integral_homology(r.wedge) == kunneth(integral_homology(x), integral_homology(y)));
}

TEST_CASE("smashing an atom with anything but a sphere is unclassified") {
    Wedge atom(make_atom(moore(2, 1, 3), ceta(5)));
    CHECK_THROWS_AS(smash_decompose(atom, Wedge(ceta(5))), UnclassifiedPair);
    CHECK(smash_decompose(atom, Wedge(sphere(3))).wedge == suspend(atom, 3));
    CHECK(smash_decompose(atom, Wedge()).wedge.empty());
}

TEST_CASE("indecomposable pairs") {
    CHECK(is_indecomposable_pair(cbot(1, 5), cbot(2, 5)));
    CHECK_FALSE(is_indecomposable_pair(sphere(3), cbot(2, 5)));
}

TEST_CASE("the sample reaches every rule") {
    auto pieces = base_pieces(3);
    CHECK(pieces.size() == 26);
    auto hits = branch_coverage(pieces);
    for (const auto& id : rule_ids()) CHECK_MESSAGE(hits[id] > 0, id);
}

TEST_CASE("the product is symmetric up to homology") {
    auto pieces = base_pieces(2);
    for (const auto& a : pieces)
        for (const auto& b : pieces)
            CHECK(integral_homology(decompose_pair(a, b).first) == integral_homology(decompose_pair(b, a).first));
}
