#include "chang/errors.hpp"
#include "chang/hom_tables.hpp"
#include "chang/smash.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace chang;

namespace {
std::vector<std::string> names(const HomGroup& g) {
    std::vector<std::string> out;
    for (const auto& gen : g.generators) out.push_back(gen.name);
    return out;
}
}  // namespace

TEST_CASE("groups between spheres and Moore spaces") {
    HomGroup g = hom_group(sphere(4), moore(2, 1, 3));
    CHECK(names(g) == std::vector<std::string>{"iη"});
    CHECK(g.group == CyclicList{2});
    CHECK(hom_group(moore(2, 1, 3), moore(2, 1, 3)).group == CyclicList{4});
    CHECK(hom_group(moore(2, 2, 7), moore(2, 1, 6)).group == CyclicList{2, 4});
    CHECK(hom_group(sphere(3), sphere(3)).group == CyclicList{0});
}

TEST_CASE("tables are stated in base dimension and hold after suspension") {
    for (int m = 0; m < 4; ++m)
        CHECK(hom_group(suspend(moore(2, 2, 3), m), suspend(sphere(3), m)).group ==
              hom_group(moore(2, 2, 3), sphere(3)).group);
}

TEST_CASE("missing entries raise UntabulatedHom") {
    CHECK_THROWS_AS(hom_group(sphere(3), cfull(1, 9, 1)), UntabulatedHom);
}

TEST_CASE("homotopy of the four-cell complex smashed with Ceta") {
    for (int r = 1; r <= 3; ++r)
        for (int s = 1; s <= 3; ++s) {
            Wedge w = smash_decompose(Wedge(ceta(5)), Wedge(cfull(r, 5, s))).wedge;
            CyclicList want = r > 1 ? CyclicList{2, std::int64_t{1} << (s + 1)} : CyclicList{2, std::int64_t{1} << s};
            CHECK(homotopy_group(9, w) == normalize(want));
        }
}

TEST_CASE("wedge groups add up over summands") {
    Wedge x = Wedge(sphere(4));
    Wedge y = Wedge(moore(2, 1, 3)) + Wedge(sphere(3));
    CHECK(wedge_hom_order(x, y) == CyclicList{2, 2});
    CHECK(wedge_hom_order(Wedge(), y).empty());
}

TEST_CASE("table tags") {
    CHECK(table_tag(Summand(moore(2, 1, 3))) == "M");
    CHECK(table_tag(Summand(make_atom(moore(2, 1, 3), ceta(5)))) == "M^Ceta");
}

TEST_CASE("the data directory follows CHANG_TABLE_PATH") {
    const char* before = std::getenv("CHANG_TABLE_PATH");
    std::string keep = before ? before : "";
    setenv("CHANG_TABLE_PATH", "/nonexistent/tables", 1);
    CHECK(data_directory() == "/nonexistent/tables");
    if (before) setenv("CHANG_TABLE_PATH", keep.c_str(), 1);
    else unsetenv("CHANG_TABLE_PATH");
    CHECK(default_hom_table().size() > 0);
}
