#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "apc/bohr.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apc;

namespace {

// |e(gx/N) - 1| = 2|sin(pi g x / N)|, evaluated from raw integers
std::set<int> oracle_bohr(int N, const std::vector<int>& gam, double rho) {
    std::set<int> out;
    for (int x = 0; x < N; ++x) {
        bool in = true;
        for (int g : gam) {
            long long gx = (static_cast<long long>(g) * x) % N;
            if (2 * std::abs(std::sin(std::numbers::pi * gx / N)) > rho + 1e-12) in = false;
        }
        if (in) out.insert(x);
    }
    return out;
}

Point pt(long long v) { return Point{v}; }

}  // namespace

TEST_CASE("bohr members") {
    GroupSpec G = make_group({12});
    CHECK(bohr_members(BohrSet{G, {}, 0.3}).size() == 12);
    Subset B = bohr_members(BohrSet{G, {1}, 1});
    CHECK(B == Subset{0, 1, 2, 10, 11});
    CHECK(bohr_members(BohrSet{G, {1, 5}, 2}).size() == 12);
    for (int N : {7, 12, 30})
        for (double rho : {0.0, 0.3, 0.5, 1.0, 1.7}) {
            GroupSpec H = make_group({N});
            for (std::vector<int> gam : {std::vector<int>{1}, {2, 3}, {1, N - 1}}) {
                Subset m = bohr_members(BohrSet{H, gam, rho});
                CHECK(std::set<int>(m.begin(), m.end()) == oracle_bohr(N, gam, rho));
                CHECK(std::binary_search(m.begin(), m.end(), 0));
                for (int x : m) CHECK(std::binary_search(m.begin(), m.end(), H.neg(x)));
            }
        }
}

TEST_CASE("bohr size estimates") {
    GroupSpec G = make_group({12});
    auto s = size_estimates(BohrSet{G, {1}, 1});
    CHECK(s.size == 5);
    CHECK(s.lower == doctest::Approx(12 / (2 * std::numbers::pi)));
    CHECK(s.size2 == 12);
    CHECK(s.doubling == 30);
    CHECK(s.lower_holds);
    CHECK(s.doubling_holds);
    CHECK(s.dilates.back().size == 5);
    // B_{1/2} = {0} since 2 sin(pi/12) > 1/2, below the stated (1/2)^r |B| = 5/4
    CHECK(s.dilates[2].size == 1);
    CHECK(s.dilates[2].bound == doctest::Approx(1.25));
    CHECK_FALSE(s.dilates[2].holds);
    CHECK_FALSE(s.all_hold);
    for (const auto& d : s.dilates) CHECK(d.sumset_inclusion);
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        int N = 5 + static_cast<int>(rng() % 40);
        GroupSpec H = make_group({N});
        int r = 1 + static_cast<int>(rng() % 3);
        Subset gam;
        for (int i = 0; i < r; ++i) gam.push_back(static_cast<int>(rng() % N));
        double rho = 2.0 * (rng() % 1000) / 1000.0;
        auto e = size_estimates(BohrSet{H, gam, rho});
        CHECK(e.lower_holds);
        CHECK(e.doubling_holds);
        for (const auto& d : e.dilates) CHECK(d.sumset_inclusion);
    }
}

TEST_CASE("bohr regularity") {
    CHECK(is_regular(BohrSet{make_group({20}), {}, 0.5}).regular);
    // Z_101, rho = 1/2: count interval lengths at the dilations directly
    GroupSpec G = make_group({101});
    BohrSet B{G, {1}, 0.5};
    auto rep = is_regular(B);
    auto count = [](double rad) { return static_cast<long long>(oracle_bohr(101, {1}, rad).size()); };
    bool ok = true;
    const long long base = count(0.5);
    for (int i = 0; i <= 64; ++i) {
        double d = (1.0 / 12) * i / 64;
        if (count(0.5 * (1 + d)) > (1 + 12 * d) * base + 1e-9) ok = false;
        if (count(0.5 * (1 - d)) < (1 - 12 * d) * base - 1e-9) ok = false;
    }
    CHECK(rep.regular == ok);
    // rho = 1 sits exactly on the member 2 of Z_12, so any shrink loses two of five points
    auto z12 = is_regular(BohrSet{make_group({12}), {1}, 1});
    CHECK_FALSE(z12.regular);
    CHECK(z12.failing_side == "lower");
    CHECK_THROWS(is_regular(B, 8));
}

TEST_CASE("bohr regularize") {
    auto ok = regularize(BohrSet{make_group({101}), {1}, 0.5});
    REQUIRE(ok.delta_star);
    CHECK(*ok.delta_star >= 0.5);
    CHECK(is_regular(dilate(BohrSet{make_group({101}), {1}, 0.5}, *ok.delta_star)).regular);
    // Z_12 at rho = 1 is irregular, and the first regular grid dilate is 1/2 + 7/128
    auto z12 = regularize(BohrSet{make_group({12}), {1}, 1});
    REQUIRE(z12.delta_star);
    CHECK(*z12.delta_star == doctest::Approx(0.5 + 7.0 / 128));
    CHECK(z12.rejected == 7);
    // exhaustive scan of small cyclic groups: the coarsest allowed grid always finds a point
    for (int N = 2; N <= 30; ++N)
        for (int k = 1; k <= 40; ++k) {
            BohrSet B{make_group({N}), {1}, 0.05 * k};
            auto r = regularize(B, 16);
            REQUIRE(r.delta_star);
            CHECK(is_regular(dilate(B, *r.delta_star), 16).regular);
        }
}

TEST_CASE("interval as bohr") {
    auto a = interval_as_bohr(12, 1);
    CHECK(a.m == 2);
    CHECK(a.members_match);
    CHECK(a.ratio == doctest::Approx(1.0 / 6));
    CHECK(a.sandwich_holds);
    auto z = interval_as_bohr(12, 0);
    CHECK(z.m == 0);
    CHECK(bohr_members(z.B) == Subset{0});
    auto big = interval_as_bohr(1000, 0.5);
    CHECK(big.members_match);
    CHECK(big.sandwich_holds);
    CHECK(big.m == static_cast<int>(std::floor(1000 * std::asin(0.25) / std::numbers::pi)));
    // for small N the lower end of the sandwich can fail
    auto tiny = interval_as_bohr(5, 0.5);
    CHECK(tiny.m == 0);
    CHECK_FALSE(tiny.sandwich_holds);
}

TEST_CASE("progression in bohr") {
    auto p = progression_in_bohr(BohrSet{make_group({12}), {1}, 1});
    CHECK(p.P.volume() == 5);
    auto mem = p.P.members();
    CHECK(std::set<long long>(mem.begin(), mem.end()) == std::set<long long>{10, 11, 0, 1, 2});
    CHECK(p.proper);
    CHECK(p.contained);
    CHECK(p.meets_bound);
    auto g = progression_in_bohr(BohrSet{make_group({12}), {}, 1});
    CHECK(g.P.volume() == 12);
    CHECK(g.proper);
    GroupSpec G = make_group({101});
    for (double rho : {0.6, 1.0, 1.4}) {
        BohrSet B{G, {3, 17}, rho};
        auto q = progression_in_bohr(B);
        CHECK(q.P.rank() == 2);
        CHECK(q.proper);
        CHECK(q.contained);
        auto o = oracle_bohr(101, {3, 17}, rho);
        for (long long y : q.P.members()) CHECK(o.count(static_cast<int>(y)));
        CHECK(q.P.proper() == q.proper);
    }
    CHECK_THROWS(progression_in_bohr(BohrSet{make_group({3, 3}), {1}, 1}));
}

TEST_CASE("freiman homomorphisms") {
    const long long N = 20;
    for (int t = 1; t <= 4; ++t) {
        long long m = (N - 1) / t;  // m < N/t
        std::vector<Point> I;
        for (long long x = 7; x <= 7 + m - 1; ++x) I.push_back(pt(x));
        auto c = check_freiman(mod_map(I, {N}), t);
        CHECK(c.verified);
        CHECK(c.exhaustive);
    }
    std::vector<Point> bad{pt(1), pt(N - 1), pt(N)};
    auto c = check_freiman(mod_map(bad, {N}), 2);
    CHECK_FALSE(c.verified);
    REQUIRE(c.counterexample);
    auto sum = [&](const std::vector<int>& ix) {
        long long s = 0;
        for (int i : ix) s += bad[i][0];
        return s;
    };
    CHECK(sum(c.counterexample->first) % N == sum(c.counterexample->second) % N);
    CHECK(sum(c.counterexample->first) != sum(c.counterexample->second));
    CHECK(check_freiman(mod_map(bad, {N}), 1).verified);

    Progression P;
    P.modulus = 101;
    P.a = 4;
    P.c = {1, 12};
    P.lengths = {5, 4};
    REQUIRE(P.proper());
    for (int t = 1; t <= 5; ++t) CHECK(check_freiman(progression_label_map(P), t).verified);

    // downward closure on random maps
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Point> X;
        for (long long x = 1; x <= 12; ++x)
            if (rng() % 2) X.push_back(pt(x));
        auto phi = mod_map(X, {13});
        bool prev = true;
        for (int t = 1; t <= 3; ++t) {
            bool v = check_freiman(phi, t).verified;
            if (!prev) CHECK_FALSE(v);
            prev = v;
        }
    }
    std::vector<Point> many;
    for (long long x = 0; x < 60; ++x) many.push_back(pt(x));
    auto s = check_freiman(mod_map(many, {1000}), 3, 100, 1);
    CHECK_FALSE(s.exhaustive);
    CHECK_FALSE(s.verified);
    CHECK_FALSE(s.note.empty());
}

TEST_CASE("smoothing") {
    Space Z10{{10}};
    std::vector<Point> A{pt(0), pt(1)}, S{pt(9), pt(0), pt(1)};
    auto r = smoothing_check(Z10, A, A, S);
    CHECK(r.identity_holds);
    CHECK(r.value_exact == "1/3");
    std::vector<Point> G;
    for (long long x = 0; x < 10; ++x) G.push_back(pt(x));
    auto g = smoothing_check(Z10, G, G, G);
    CHECK(g.value_exact == "1/10");
    CHECK(g.identity_holds);
    auto pm = smoothing_check(Z10, A, A, S, {Rational(1), Rational(0)});
    CHECK(pm.identity_holds);
    CHECK_THROWS(smoothing_check(Z10, A, A, {pt(0), pt(1)}));
    // integers, with a test function
    Space Z{{0}};
    std::vector<Point> I{pt(0), pt(1), pt(2), pt(3)}, J{pt(0), pt(1)}, T;
    for (long long x = -1; x <= 3; ++x) T.push_back(pt(x));
    std::vector<std::pair<Point, double>> f;
    for (long long x = -3; x <= 6; ++x) f.emplace_back(pt(x), static_cast<double>((x * 7) % 5 + 5));
    auto z = smoothing_check(Z, I, J, T, {}, f);
    CHECK(z.identity_holds);
    REQUIRE(z.one_sided_holds);
    CHECK(*z.one_sided_holds);
    CHECK(z.delta == doctest::Approx(0.25));

    GroupSpec H = make_group({101});
    RealFn fn(H);
    for (int x = 0; x < 101; ++x) fn[x] = (x * x) % 7;
    BohrSet B{H, {1}, 0.5};
    auto bs = bohr_smoothing_check(B, 1.0 / 48, fn);
    CHECK(bs.holds);
}

TEST_CASE("safe spec") {
    auto s = make_safe_spec({41, 53}, 0.1);
    CHECK(s.U[0] == Interval{9, 41});
    CHECK(s.M[0] == Interval{22, 25});
    CHECK(s.v[0] == 22);
    CHECK(s.m[0] == 1);
    CHECK(s.upper_fraction_ok);
    CHECK(upper_middle_property(s));
    CHECK_THROWS(make_safe_spec({10}, 0.7));
}

TEST_CASE("pullback intervals") {
    for (long long a = 0; a < 20; ++a) {
        auto pb = pullback_interval(20, a, 5);
        CHECK(pb.matches_observation);
        long long total = 0;
        for (auto [l, r] : pb.intervals) total += r - l + 1;
        CHECK(total == 5);
    }
    auto wrap = pullback_interval(20, 17, 5);
    REQUIRE(wrap.intervals.size() == 2);
    CHECK(wrap.intervals[0] == Interval{1, 2});
    CHECK(wrap.intervals[1] == Interval{18, 20});
}

TEST_CASE("safe box") {
    auto r = safe_box({20}, 0.25, {5}, 2);
    CHECK(r.certified);
    CHECK(r.exhaustive);
    CHECK(r.thetas == 20);
    CHECK(r.U[0] == Interval{5, 20});
    auto half = safe_box({20}, 0.5, {10}, 2);
    CHECK(half.certified);
    auto two = safe_box({11, 13}, 0.25, {2, 3}, 4);
    CHECK(two.certified);
    CHECK(two.thetas == 143);
    CHECK_THROWS(safe_box({20}, 0.25, {5}, 5));
    CHECK_THROWS(safe_box({20}, 0.25, {6}, 2));
    CHECK_THROWS(safe_box({20}, 0.6, {5}, 1));
}
