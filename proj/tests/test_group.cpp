#include <set>

#include "apc/group.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apc;

TEST_CASE("make_group basics") {
    auto G = make_group({3, 3});
    CHECK(G.order() == 9);
    CHECK(G.is_prime_vector_space());
    CHECK(make_group({5}).order() == 5);
    auto H = make_group({4, 6});
    CHECK(H.order() == 24);
    CHECK_FALSE(H.is_prime_vector_space());
    CHECK_THROWS_AS(make_group({1, 3}), ApcError);
    set_size_budget(100);
    CHECK_THROWS_AS(make_group({11, 11}), ApcError);
    set_size_budget(1 << 20);
}

TEST_CASE("element order is lexicographic") {
    auto G = make_group({2, 3});
    CHECK(G.coords(0) == Elem{0, 0});
    CHECK(G.coords(1) == Elem{0, 1});
    CHECK(G.coords(3) == Elem{1, 0});
    for (int i = 0; i < G.order(); ++i) CHECK(G.index(G.coords(i)) == i);
}

TEST_CASE("character values") {
    auto Z4 = make_group({4});
    auto v = character_value(Z4, Elem{1}, Elem{1});
    CHECK(std::abs(v - cd(0, 1)) < 1e-15);
    auto Z6 = make_group({6});
    CHECK(std::abs(character_value(Z6, Elem{2}, Elem{3}) - cd(1, 0)) < 1e-15);
    auto G = make_group({4, 6});
    for (int x = 0; x < G.order(); ++x) CHECK(std::abs(character_value(G, 0, x) - cd(1)) < 1e-15);
    // multiplicativity and symmetry
    for (int a = 0; a < G.order(); a += 5)
        for (int b = 0; b < G.order(); b += 7)
            for (int x = 0; x < G.order(); x += 3) {
                auto lhs = character_value(G, G.add(a, b), x);
                auto rhs = character_value(G, a, x) * character_value(G, b, x);
                CHECK(std::abs(lhs - rhs) < 1e-12);
                CHECK(G.phase(a, x) == G.phase(x, a));
            }
}

TEST_CASE("character orthogonality") {
    for (auto mod : std::vector<std::vector<int>>{{16, 16}, {2, 2, 2, 2, 2, 2, 2, 2}, {5, 7}, {12}}) {
        auto G = make_group(mod);
        int n = G.order();
        for (int a = 0; a < n; a += std::max(1, n / 12))
            for (int b = 0; b < n; ++b) {
                cd s = 0;
                for (int x = 0; x < n; ++x) s += character_value(G, a, x) * std::conj(character_value(G, b, x));
                s /= n;
                if (a == b)
                    CHECK(std::abs(s - cd(1)) <= 1e-12);
                else
                    CHECK(std::abs(s) <= 1e-12);
            }
    }
}

TEST_CASE("span_affine examples") {
    auto F22 = make_group({2, 2});
    auto S = span_affine(F22, {0});
    CHECK(S.codim() == 2);
    CHECK(S.members() == Subset{0});
    auto L = span_affine(F22, {F22.index({0, 0}), F22.index({1, 0})});
    CHECK(L.codim() == 1);
    CHECK(L.members() == Subset{F22.index({0, 0}), F22.index({1, 0})});
    auto F32 = make_group({3, 3});
    Subset all(9);
    for (int i = 0; i < 9; ++i) all[i] = i;
    CHECK(span_affine(F32, all).codim() == 0);
    CHECK_THROWS_AS(span_affine(make_group({4}), {0}), ApcError);
    CHECK_THROWS_AS(span_affine(F22, {}), ApcError);
}

TEST_CASE("span_affine is minimal by exhaustive intersection") {
    Rng rng(7);
    for (auto mod : std::vector<std::vector<int>>{{3, 3, 3}, {2, 2, 2, 2}, {5, 5}}) {
        auto G = make_group(mod);
        std::vector<AffineSubspace> all;
        enumerate_affine_subspaces(G, G.rank(), [&](const AffineSubspace& V) { all.push_back(V); });
        for (int t = 0; t < 25; ++t) {
            Subset A;
            for (int x = 0; x < G.order(); ++x)
                if (rng() % 5 == 0) A.push_back(x);
            if (A.empty()) A.push_back(static_cast<int>(rng() % G.order()));
            auto S = span_affine(G, A);
            std::set<int> inter;
            for (int x = 0; x < G.order(); ++x) inter.insert(x);
            for (const auto& V : all) {
                bool ok = true;
                for (int a : A) ok = ok && V.contains(a);
                if (!ok) continue;
                std::set<int> keep;
                for (int x : V.members())
                    if (inter.count(x)) keep.insert(x);
                inter.swap(keep);
            }
            CHECK(S.members() == Subset(inter.begin(), inter.end()));
        }
    }
}

TEST_CASE("affine subspace enumeration counts") {
    int cnt = 0;
    enumerate_affine_subspaces(make_group({2, 2}), 1, [&](const AffineSubspace&) { ++cnt; });
    CHECK(cnt == 7);
    cnt = 0;
    enumerate_affine_subspaces(make_group({2}), 1, [&](const AffineSubspace&) { ++cnt; });
    CHECK(cnt == 3);
    cnt = 0;
    enumerate_affine_subspaces(make_group({3, 3, 3}), 0, [&](const AffineSubspace& V) {
        ++cnt;
        CHECK(V.codim() == 0);
    });
    CHECK(cnt == 1);
    // every subspace yielded once, with p^(n-c) members
    auto G = make_group({3, 3, 3});
    std::set<Subset> seen;
    enumerate_affine_subspaces(G, 3, [&](const AffineSubspace& V) {
        auto m = V.members();
        CHECK(static_cast<long long>(m.size()) == V.size());
        for (int x = 0; x < G.order(); ++x) CHECK(V.contains(x) == std::binary_search(m.begin(), m.end(), x));
        CHECK(seen.insert(m).second);
    });
    CHECK(static_cast<long long>(seen.size()) == count_affine_subspaces(3, 3, 3));
}

TEST_CASE("doubling is a permutation for odd p") {
    for (auto mod : std::vector<std::vector<int>>{{3, 3, 3}, {5, 5}, {7}}) {
        auto G = make_group(mod);
        std::set<int> img;
        for (int x = 0; x < G.order(); ++x) img.insert(G.add(x, x));
        CHECK(static_cast<int>(img.size()) == G.order());
    }
}
