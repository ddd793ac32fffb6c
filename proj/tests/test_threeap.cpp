#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "apc/threeap.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apc;

namespace {

std::vector<long long> greedy_free(long long lo, long long hi, long long start) {
    std::vector<long long> order;
    for (long long x = start; x <= hi; ++x) order.push_back(x);
    for (long long x = start - 1; x >= lo; --x) order.push_back(x);
    std::set<long long> A;
    for (long long x : order) {
        bool ok = true;
        for (long long a : A) {
            if (A.count(2 * a - x) || ((a + x) % 2 == 0 && A.count((a + x) / 2))) {
                ok = false;
                break;
            }
        }
        if (ok) A.insert(x);
    }
    return {A.begin(), A.end()};
}

// a 3-AP-free set of [211] packed around the middle of the upper portion
Configuration nice_211() { return interval_configuration(211, greedy_free(43, 211, 116)); }

}  // namespace

TEST_CASE("count 3aps against the cubic oracle") {
    CHECK(count_3aps(std::vector<long long>{1, 2, 3, 4}).total == 8);
    for (unsigned mask = 0; mask < (1u << 12); mask += 7) {
        std::vector<long long> A;
        for (int i = 0; i < 12; ++i)
            if (mask >> i & 1) A.push_back(i + 1);
        auto c = count_3aps(A);
        CHECK(c.nontrivial == oracle::aps_cubic(A));
        CHECK(c.trivial == static_cast<long long>(A.size()));
    }
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        std::vector<long long> A;
        for (int i = 0; i < 60; ++i) A.push_back(static_cast<long long>(rng() % 300));
        std::vector<Point> P;
        for (long long a : A) P.push_back(Point{a % 17, a / 17});
        std::sort(A.begin(), A.end());
        A.erase(std::unique(A.begin(), A.end()), A.end());
        CHECK(count_3aps(A).nontrivial == oracle::aps_cubic(A));
        // the coordinate split x -> (x mod 17, x div 17) is not additive, so only totals of the point form are checked
        auto cp = count_3aps(P);
        CHECK(cp.total >= cp.trivial);
    }
}

TEST_CASE("count 3aps in groups") {
    auto G = make_group({3, 3, 3});
    Subset all(G.order());
    for (int i = 0; i < G.order(); ++i) all[i] = i;
    CHECK(count_3aps(G, all).total == 27LL * 27);
    auto H = make_group({5, 5});
    Subset allh(25);
    for (int i = 0; i < 25; ++i) allh[i] = i;
    CHECK(count_3aps(H, allh).total == 625);
    // {0, 1} in Z_3: 0 + 1 = 2 * 2 needs 2, so only trivial solutions
    auto Z3 = make_group({3});
    auto c = count_3aps(Z3, Subset{0, 1});
    CHECK(c.total == 2);
    CHECK(c.nontrivial == 0);
}

TEST_CASE("extremal 3-ap-free sizes") {
    std::vector<std::array<int, 3>> tri;
    for (int x = 0; x < 9; ++x)
        for (int y = 0; y < 9; ++y)
            for (int z = 0; z < 9; ++z)
                if (x != y && x + y == 2 * z) tri.push_back({x, y, z});
    CHECK(oracle::max_free(9, tri) == 5);
    CHECK(oracle::max_free(9, oracle::group_triples({3, 3})) == 4);
    CHECK(oracle::max_free(27, oracle::group_triples({3, 3, 3})) == 9);
}

TEST_CASE("behrend sets") {
    auto b2 = behrend_set(2);
    CHECK(b2.set == std::vector<long long>{1, 2});
    CHECK(b2.certified);
    auto b10 = behrend_set(10);
    CHECK(b10.certified);
    CHECK(oracle::aps_cubic(b10.set) == 0);
    CHECK(b10.set.size() == 5);
    for (long long N : {50LL, 243LL, 1000LL, 3000LL}) {
        auto b = behrend_set(N);
        CHECK(b.certified);
        CHECK(b.set.front() >= 1);
        CHECK(b.set.back() <= N);
    }
    CHECK_THROWS_AS(behrend_set(1), ApcError);
}

TEST_CASE("behrend sphere shells") {
    // n=2, d=2: digits {0,1}^2 in base 3, shell |x|^2 = 1 is {1, 3}
    auto s13 = behrend_sphere(13);
    CHECK(s13.set == std::vector<long long>{2, 4});
    CHECK(s13.dim == 2);
    CHECK(s13.digits == 2);
    CHECK(s13.radius2 == 1);
    CHECK(behrend_sphere(4).set == std::vector<long long>{1});
    for (long long N : {200LL, 2000LL}) {
        auto b = behrend_sphere(N);
        CHECK(b.certified);
        CHECK(b.radius2 >= 0);
        CHECK(oracle::aps_cubic(b.set) == 0);
        CHECK(b.set.back() <= N);
        CHECK(behrend_set(N).set.size() >= b.set.size());
    }
    CHECK_THROWS_AS(behrend_sphere(1), ApcError);
}

TEST_CASE("good increments") {
    SpreadnessConfig sc;
    std::vector<long long> A{1, 2, 5, 9, 10, 11, 12, 20};
    auto cfg = interval_configuration(20, A);
    GoodIncrement id;
    id.Aprime = cfg.A;
    id.image = cfg.A;
    id.Nprime = {20};
    auto r = is_good_increment(cfg, id, sc);
    CHECK(r.well_formed);
    CHECK(r.hom.verified);
    CHECK_FALSE(r.density_ok);
    CHECK_FALSE(r.verified);
    SpreadnessConfig zero = sc;
    zero.eps = 0;
    CHECK(is_good_increment(cfg, id, zero).density_ok);

    // the dense block 9..12 moved to [4]
    GoodIncrement sub;
    for (long long x : {9, 10, 11, 12}) {
        sub.Aprime.push_back(Point{x});
        sub.image.push_back(Point{x - 8});
    }
    sub.Nprime = {4};
    auto s = is_good_increment(cfg, sub, sc);
    CHECK(s.density_after == doctest::Approx(1.0));
    CHECK(s.density_ok);
    CHECK(s.rank_ok);
    CHECK(s.size_ok);
    CHECK(s.monotone);
    CHECK(s.verified);

    // folding 1, 2, 5 onto 1, 2, 3 creates a 3-AP that was not there
    GoodIncrement fold;
    fold.Aprime = {Point{1}, Point{2}, Point{5}};
    fold.image = {Point{1}, Point{2}, Point{3}};
    fold.Nprime = {3};
    auto f = is_good_increment(cfg, fold, sc);
    CHECK_FALSE(f.hom.verified);
    CHECK_FALSE(f.monotone);
    CHECK_FALSE(f.verified);

    GoodIncrement bad = sub;
    bad.image[0] = Point{7};
    CHECK_FALSE(is_good_increment(cfg, bad, sc).well_formed);
    bad = sub;
    bad.Aprime[0] = Point{3};
    CHECK(is_good_increment(cfg, bad, sc).malformed == "subset point outside A");
}

TEST_CASE("middle slice identity") {
    for (long long N = 3; N <= 200; ++N)
        for (double delta : {0.05, 0.1, 0.25})
            CHECK(upper_middle_property(make_safe_spec({N}, delta)));
}

TEST_CASE("nice check") {
    auto cfg = nice_211();
    CHECK(cfg.A.size() == 32);
    CHECK(count_3aps(cfg).nontrivial == 0);
    auto nc = check_nice(cfg, 0.1);
    CHECK(nc.nice);
    CHECK(nc.v[0] == 116);
    CHECK(nc.m[0] == 7);
    CHECK(nc.max_rep == 1);
    // the whole upper portion has huge representation counts
    std::vector<long long> U;
    for (long long x = 43; x <= 211; ++x) U.push_back(x);
    auto full = check_nice(interval_configuration(211, U), 0.1);
    CHECK(full.upper);
    CHECK_FALSE(full.reps);
    CHECK_FALSE(full.nice);
    // sides too short for a width-1 middle cube
    auto tiny = check_nice(interval_configuration(11, {5, 6, 9}), 0.1);
    CHECK_FALSE(tiny.widths_ok);
    CHECK_FALSE(tiny.nice);
}

TEST_CASE("make nice branches") {
    SpreadnessConfig sc;
    std::vector<long long> ev;
    for (long long x = 2; x <= 400; x += 2) ev.push_back(x);
    auto cfg = interval_configuration(400, ev);
    auto r = make_nice(cfg, 0.1, sc);
    CHECK(r.branch == NiceBranch::Increment);
    CHECK(r.certified);
    CHECK(r.primes == std::vector<long long>{11});
    CHECK(r.density_ok);
    CHECK(r.increment_check.hom.verified);
    CHECK(r.density_ratio >= 1.05);
    // one bit of entropy only allows a two-bit size loss
    CHECK_FALSE(r.increment_check.size_ok);

    // planted dense block inside sparse noise
    Rng rng(5);
    std::vector<long long> A;
    for (int i = 1; i <= 400; ++i) {
        if (i >= 100 && i <= 180) {
            if (rng() % 4) A.push_back(i);
        } else if (rng() % 10 == 0) {
            A.push_back(i);
        }
    }
    auto p = make_nice(interval_configuration(400, A), 0.1, sc);
    CHECK(p.branch == NiceBranch::Increment);
    CHECK(p.certified);
    CHECK(p.increment_check.verified);

    CHECK_THROWS_AS(make_nice(cfg, 0.2, sc), ApcError);
    CHECK_THROWS_AS(make_nice(cfg, 1.0 / 512, sc), ApcError);
}

TEST_CASE("make nice on behrend sets") {
    SpreadnessConfig sc;
    auto b = behrend_set(400);
    auto r = make_nice(interval_configuration(400, b.set), 0.1, sc);
    CHECK(r.branch != NiceBranch::ManyAPs);
    CHECK(count_3aps(b.set).nontrivial == 0);
}

TEST_CASE("embed nice") {
    auto cfg = nice_211();
    auto em = embed_nice(cfg, 0.1);
    CHECK(em.G.order() == 211);
    CHECK(em.B.freqs == Subset{106});
    CHECK(em.bohr_exact);
    CHECK(em.B_members.size() == 15);
    CHECK(em.k == 8);
    CHECK(em.margin_ok);
    CHECK(em.norm == doctest::Approx(4.70033).epsilon(1e-5));
    CHECK(em.centered_ok);
    CHECK(em.safe);
    CHECK(em.safe_translates == 211);
    CHECK(crt_index({3, 5}, Point{2, 4}) == 14);
    CHECK(crt_index({3, 5}, Point{-1, -1}) == 14);
    CHECK_THROWS_AS(embed_nice(interval_configuration(11, {5, 6, 9}), 0.1), ApcError);
}

TEST_CASE("schoen sisask search") {
    auto G = make_group({64});
    Subset all(64);
    for (int i = 0; i < 64; ++i) all[i] = i;
    RealFn f(G);
    for (int i = 0; i < 64; i += 3) f[i] = 1;
    BohrSet B{G, {1}, 1.0};
    auto t = schoen_sisask_search(G, all, all, B, f, 0.01);
    CHECK(t.certified);
    CHECK(t.max_deviation < 1e-12);
    CHECK(t.rounds == 0);

    // cosets of the subgroup 8 Z_64
    Subset X, Y;
    for (int i = 0; i < 64; i += 8) {
        X.push_back(i + 1);
        Y.push_back(i + 2);
    }
    RealFn g(G);
    for (int i = 0; i < 64; ++i) g[i] = i % 8 == 3 ? 1 : 0;
    auto s = schoen_sisask_search(G, X, Y, B, g, 0.01);
    CHECK(s.certified);
    for (int b : s.members) CHECK(b % 8 == 0);
}

TEST_CASE("svr local") {
    auto G = make_group({101});
    const double rho = 2 * std::sin(std::numbers::pi * 10 / 101);
    BohrSet B{G, {1}, rho};
    CHECK(bohr_members(B).size() == 21);
    Subset A;
    for (int x = 40; x <= 60; ++x) A.push_back(x);
    SearchBudget bud;
    auto r = svr_local(G, A, B, 2, 0.5, bud);
    CHECK(r.certified);
    CHECK(r.final_proper);
    CHECK(r.final_in_translate);
    CHECK(r.final_double >= 1 + 0.5 / 8 - 1e-9);
    CHECK(r.stages.back().id == "extract");

    Subset all(101);
    for (int i = 0; i < 101; ++i) all[i] = i;
    CHECK_THROWS_AS(svr_local(G, all, B, 2, 0.5, bud), ApcError);

    // the embedded nice configuration runs through the same chain
    auto em = embed_nice(nice_211(), 0.1);
    Subset img = em.image;
    std::sort(img.begin(), img.end());
    auto e = svr_local(em.G, img, em.B, em.k, 0.25, bud);
    CHECK(e.certified);
    CHECK(e.final_value >= Rational(33, 32));
}

TEST_CASE("pass to spread") {
    SpreadnessConfig sc;
    SearchBudget bud;
    std::vector<long long> full;
    for (int i = 1; i <= 50; ++i) full.push_back(i);
    auto f = pass_to_spread(50, full, sc, 1, bud);
    CHECK(f.iterations == 0);
    CHECK(f.composition_hom);
    CHECK(f.Aprime == full);

    Rng rng(3);
    std::vector<long long> rnd;
    for (int i = 1; i <= 200; ++i)
        if (rng() % 3 == 0) rnd.push_back(i);
    auto r = pass_to_spread(200, rnd, sc, 1, bud);
    CHECK(r.within_bound);
    CHECK_FALSE(r.trace.empty());
    CHECK(r.stop_reason.rfind("no increment found", 0) == 0);

    Rng prng(5);
    std::vector<long long> A;
    for (int i = 1; i <= 400; ++i) {
        if (i >= 100 && i <= 180) {
            if (prng() % 4) A.push_back(i);
        } else if (prng() % 10 == 0) {
            A.push_back(i);
        }
    }
    auto p = pass_to_spread(400, A, sc, 1, bud, 16, 0.1);
    CHECK(p.iterations >= 1);
    CHECK(p.within_bound);
    CHECK(p.composition_hom);
    CHECK(count_3aps(p.final_cfg).total <= count_3aps(p.Aprime).total);
    auto again = pass_to_spread(400, A, sc, 1, bud, 16, 0.1);
    CHECK(again.Aprime == p.Aprime);
    CHECK(again.trace.size() == p.trace.size());
    CHECK(again.trace[0].inputs_hash == p.trace[0].inputs_hash);
}

TEST_CASE("max 3-ap-free search agrees with the oracle") {
    for (int n = 1; n <= 14; ++n) {
        std::vector<std::array<int, 3>> tri;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z)
                    if (x != y && x + y == 2 * z) tri.push_back({x, y, z});
        CHECK(max_3ap_free_interval(n) == oracle::max_free(n, tri));
    }
    CHECK(max_3ap_free_interval(9) == 5);
    CHECK(max_3ap_free_group(make_group({3, 3})) == 4);
    CHECK(max_3ap_free_group(make_group({3, 3, 3})) == 9);
    CHECK(max_3ap_free_group(make_group({2, 2, 2})) == 8);
    CHECK(max_3ap_free_group(make_group({7})) == oracle::max_free(7, oracle::group_triples({7})));
}
