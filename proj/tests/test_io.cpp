#include <string>

#include "apc/io.hpp"
#include "doctest.h"

using namespace apc;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_set(text, "a.set");
    } catch (const ApcError& e) {
        CHECK(e.code() == Exit::Usage);
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("set files") {
    auto s = parse_set("# comment\ngroup 3 3\n0 1\n2 2  # trailing\n\n1 0\n");
    CHECK(s.kind == "group");
    CHECK(s.dims == std::vector<long long>{3, 3});
    CHECK(s.points.size() == 3);
    CHECK(parse_set(format_set(s)).points == s.points);
    auto G = set_group(s);
    CHECK(set_subset(G, s) == Subset{1, 3, 8});
    CHECK(format_set(group_set(G, {1, 3, 8})) == "group 3 3\n0 1\n1 0\n2 2\n");

    auto b = parse_set("box 10\n1\n10\n");
    CHECK(b.points.back() == Point{10});
    CHECK(format_set(box_set(10, {1, 10})) == format_set(b));
    CHECK_THROWS_AS(set_group(b), ApcError);

    CHECK(error_of("group 5\n1\n7\n") == "a.set:3:1: coordinate 7 outside [0, 4]");
    CHECK(error_of("group 5 5\n1 x\n") == "a.set:2:3: expected an integer, got 'x'");
    CHECK(error_of("group 5 5\n1 2 3\n") == "a.set:2:1: expected 2 coordinates, got 3");
    CHECK(error_of("box 5\n0\n") == "a.set:2:1: coordinate 0 outside [1, 5]");
    CHECK(error_of("group 5\n2\n 2\n") == "a.set:3:2: duplicate element");
    CHECK(error_of("ring 5\n") == "a.set:1:1: header must start with 'group' or 'box'");
    CHECK(error_of("group 4\n3z\n") == "a.set:2:2: trailing characters in '3z'");
    CHECK(error_of("") == "a.set:1:1: missing header 'group ...' or 'box ...'");
}

TEST_CASE("density files") {
    auto d = parse_density("density 4\n0 1/2\n1 1.5\n3 2e-1\n");
    CHECK(d.values[0] == Rational(1, 2));
    CHECK(d.values[1] == Rational(3, 2));
    CHECK(d.values[2] == Rational(1, 5));
    CHECK(parse_density(format_density(d)).values == d.values);
    CHECK_THROWS_WITH_AS(parse_density("density 4\n0 -1\n", "d"), "d:2:3: density values must be nonnegative", ApcError);
    CHECK_THROWS_WITH_AS(parse_density("density 4\n0 1/0\n", "d"), "d:2:3: bad fraction '1/0'", ApcError);
    CHECK(parse_rational("-0.125") == Rational(-1, 8));
    CHECK(parse_rational("25e2") == Rational(2500));
}

TEST_CASE("map files") {
    auto m = parse_map("1\t->\t1\t1\n2\t->\t2\t1\n");
    CHECK(m.x.size() == 2);
    CHECK(m.y[1] == Point{2, 1});
    CHECK(parse_map(format_map(m)).y == m.y);
    CHECK(format_map(m) == "1\t->\t1\t1\n2\t->\t2\t1\n");
    CHECK_THROWS_WITH_AS(parse_map("1\t1\n", "m"), "m:1:1: missing '->'", ApcError);
    CHECK_THROWS_WITH_AS(parse_map("1 -> 1\n1 2 -> 1\n", "m"), "m:2:1: dimension differs from the first line",
                         ApcError);
    CHECK_THROWS_WITH_AS(parse_map("-> 1\n", "m"), "m:1:1: empty source point", ApcError);
}
