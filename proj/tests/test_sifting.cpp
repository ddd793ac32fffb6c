#include <algorithm>

#include "apc/sifting.hpp"
#include "doctest.h"

using namespace apc;

namespace {

Subset random_set(const GroupSpec& G, Rng& rng, double dens) {
    Subset A;
    std::bernoulli_distribution B(dens);
    for (int x = 0; x < G.order(); ++x)
        if (B(rng)) A.push_back(x);
    if (A.empty()) A.push_back(0);
    return A;
}

RealFn random_f(const GroupSpec& G, Rng& rng) {
    RealFn f(G);
    for (auto& v : f.v) v = static_cast<double>(rng() % 5) / 4;  // dyadic, exact
    return f;
}

// First tuple in full lexicographic order over G^L meeting the self-sift bounds,
// computed with plain loops and doubles with a small slack.
std::vector<int> oracle_self_first(const GroupSpec& G, const Subset& A, const RealFn& f, int k) {
    int n = G.order();
    std::vector<double> R(n, 0);
    for (int a : A)
        for (int b : A) R[G.sub(a, b)] += 1;
    double num = 0, den = 0;
    for (int x = 0; x < n; ++x) {
        num += std::pow(R[x], k) * f[x];
        den += std::pow(R[x], k);
    }
    double cap = 2 * num / den, need = 0.5 * den / std::pow(A.size(), k);
    int L = k - 1;
    std::vector<int> s(L, 0);
    while (true) {
        Subset Ap;
        for (int a : A) {
            bool in = true;
            for (int sj : s) in = in && std::binary_search(A.begin(), A.end(), G.sub(a, sj));
            if (in) Ap.push_back(a);
        }
        if (!Ap.empty() && Ap.size() >= need - 1e-9) {
            double g = 0;
            for (int a : Ap)
                for (int b : Ap) g += f[G.sub(a, b)];
            if (g / (Ap.size() * Ap.size()) <= cap + 1e-12) return s;
        }
        int i = L - 1;
        while (i >= 0 && ++s[i] == n) s[i--] = 0;
        if (i < 0) break;
    }
    return {};
}

}  // namespace

TEST_CASE("weighted pigeonhole") {
    CHECK(weighted_pigeonhole({1, 3}, {1, 1}, "i") == 0);
    CHECK(weighted_pigeonhole({0, 0}, {0, 5}, "i") == 1);
    int j = weighted_pigeonhole({3, 1, 1}, {4, 1, 1}, "ii");
    double eta = 5.0 / 6, mu = 2;
    std::vector<double> g{3, 1, 1}, h{4, 1, 1};
    CHECK(h[j] >= mu / 2);
    CHECK(g[j] / h[j] <= 2 * eta);
    PigeonholeParams p;
    p.H = 4;
    p.tau = 0.5;
    j = weighted_pigeonhole({3, 1, 1}, {4, 1, 1}, "iii", p);
    CHECK(j == 0);
    p.I = {1, 2};
    p.tau = 1.0 / 3;
    j = weighted_pigeonhole({3, 1, 1}, {4, 1, 1}, "iv", p);
    CHECK((j == 1 || j == 2));
    CHECK(g[j] / h[j] <= eta / p.tau + 1e-12);
    CHECK_THROWS_AS(weighted_pigeonhole({1}, {0}, "i"), ApcError);
    p.tau = 0.9;
    CHECK_THROWS_AS(weighted_pigeonhole({3, 1, 1}, {4, 1, 1}, "iv", p), ApcError);
}

TEST_CASE("sift_self examples") {
    auto G = make_group({4});
    Subset all{0, 1, 2, 3};
    auto out = sift_self(G, all, RealFn(G, 0.0), 3, {});
    CHECK(out.certified);
    CHECK(out.sets[0] == all);
    CHECK(out.achieved_ratio == 0.0);

    auto Z5 = make_group({5});
    RealFn f(Z5, 1.0);
    f[0] = 0;
    out = sift_self(Z5, {0, 1}, f, 2, {});
    CHECK(out.certified);
    CHECK(out.shifts == std::vector<int>{0});
    CHECK(out.sets[0] == Subset{0, 1});
    CHECK(out.achieved_ratio_exact == "1/2");
    CHECK(out.guarantee_ratio_exact == "2/3");
    CHECK(out.guarantee_sizes[0] == doctest::Approx(0.75));
}

TEST_CASE("density and counting guarantees agree") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        auto G = make_group({static_cast<int>(5 + rng() % 40)});
        auto A = random_set(G, rng, 0.3);
        for (int k : {2, 3, 4}) {
            auto g = self_guarantees(G, A, k);
            CHECK(std::abs(g.counting_size.get_d() - g.density_size) <= 1e-9 * std::max(1.0, g.density_size));
        }
    }
}

TEST_CASE("exhaustive self sift matches lexicographic oracle") {
    Rng rng(17);
    for (int t = 0; t < 60; ++t) {
        auto G = make_group({static_cast<int>(4 + rng() % 12)});
        auto A = random_set(G, rng, 0.4);
        auto f = random_f(G, rng);
        int k = 2 + static_cast<int>(rng() % 2);
        auto out = sift_self(G, A, f, k, {});
        REQUIRE(out.certified);
        CHECK(out.shifts == oracle_self_first(G, A, f, k));
    }
}

TEST_CASE("sift_pair and sift_local") {
    auto Z7 = make_group({7});
    Rng rng(4);
    RealFn f = random_f(Z7, rng);
    auto out = sift_pair(Z7, {0, 1}, {0, 2}, f, 2, {});
    CHECK(out.certified);
    CHECK(out.achieved_sizes[0] >= out.guarantee_sizes[0] - 1e-12);
    CHECK(out.achieved_sizes[1] >= out.guarantee_sizes[1] - 1e-12);
    CHECK(out.achieved_ratio <= out.guarantee_ratio + 1e-12);
    auto G = make_group({2, 3});
    Subset all{0, 1, 2, 3, 4, 5};
    out = sift_pair(G, all, all, RealFn(G, 0.0), 2, {});
    CHECK(out.certified);

    auto Z6 = make_group({6});
    out = sift_local(Z6, {0, 3}, {0, 1, 2}, {0, 1, 2}, RealFn(Z6, 1.0), 1, {});
    CHECK(out.certified);
    CHECK(out.guarantee_ratio == doctest::Approx(2.0));
    CHECK(out.guarantee_sizes[0] == doctest::Approx(0.5));
    CHECK(out.shifts == std::vector<int>{0});
    CHECK(out.sets[0] == Subset{0});
    CHECK(out.sets[1] == Subset{0});
    out = sift_local(G, all, all, all, RealFn(G, 0.0), 2, {});
    CHECK(out.certified);
    CHECK(out.sets[0] == all);
    auto Z8 = make_group({8});
    int certified = 0, total = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Rng r(seed);
        auto A = random_set(Z8, r, 0.5), B = random_set(Z8, r, 0.5), C = random_set(Z8, r, 0.5);
        auto res = sift_local(Z8, A, B, C, random_f(Z8, r), 2, {});
        if (res.vacuous) continue;
        ++total;
        certified += res.certified;
    }
    CHECK(certified == total);
    CHECK(total > 50);
}

TEST_CASE("sampled mode reports success counts") {
    auto G = make_group({16});
    Rng rng(8);
    auto A = random_set(G, rng, 0.5);
    SearchBudget b;
    b.mode = SearchMode::Sampled;
    b.samples = 300;
    b.seed = 99;
    auto out = sift_self(G, A, random_f(G, rng), 3, b);
    CHECK(out.tried == 300);
    CHECK(out.successes > 0);
    CHECK(out.certified);
    auto again = sift_self(G, A, out.sets.empty() ? RealFn(G, 0.0) : random_f(G, rng), 3, b);
    CHECK(again.tried == 300);
}

TEST_CASE("best mode returns minimum ratio") {
    auto G = make_group({9});
    Rng rng(31);
    auto A = random_set(G, rng, 0.5);
    auto f = random_f(G, rng);
    SearchBudget b;
    b.best = true;
    auto best = sift_self(G, A, f, 3, b);
    auto first = sift_self(G, A, f, 3, {});
    CHECK(best.certified);
    CHECK(best.achieved_ratio <= first.achieved_ratio + 1e-15);
}

TEST_CASE("power identity") {
    auto G = make_group({7});
    for (int mask = 1; mask < 128; mask += 9) {
        Subset A;
        for (int x = 0; x < 7; ++x)
            if (mask >> x & 1) A.push_back(x);
        for (int k : {1, 2, 3}) CHECK(power_identity_holds(G, A, k));
    }
}

TEST_CASE("robust witness on a subspace") {
    auto G = make_group({2, 2, 2, 2});
    Subset V;
    for (int x = 0; x < 16; ++x)
        if ((x & 3) == 0) V.push_back(x);  // codim-2 subspace
    auto w = sift_robust_witness(G, V, 2, 1.0, {});
    CHECK(w.outcome.certified);
    CHECK(w.corollary_certified);
    CHECK(w.k_used == 22);
    CHECK(w.witness_mass <= 1.0 / 16 + 1e-12);
    CHECK(w.chain_holds);
    CHECK(robust_witness_k(3, 0.5) == 23);
    CHECK(robust_witness_k(1, 0.25) == static_cast<int>(std::ceil(1 + 2 * std::log2(128) / 0.25)));
    CHECK_THROWS_AS(sift_robust_witness(G, Subset{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}, 2, 0.5, {}),
                    ApcError);
}

TEST_CASE("local witness on Z_16 with a planted coset") {
    auto G = make_group({16});
    Subset A{0, 4, 8, 12, 3};
    Subset B{0, 4, 8, 12}, C{0, 4, 8, 12};
    auto w = sift_local_witness(G, A, B, C, 2, 0.5, 4, {});
    CHECK(w.outcome.certified);
    CHECK(w.corollary_certified);
    CHECK(w.corollary_ratio_bound <= 2.0);
    CHECK(w.hypothesis_norm >= 2.0);
}

TEST_CASE("extended pre-BSG") {
    std::vector<long long> ap{3, 5, 7, 9, 11, 13, 15, 17};
    auto o = extended_pre_bsg(ap, 2, 1.0, {});
    CHECK(o.certified);
    CHECK(o.kappa_exact == "43/64");  // sum R^2 = 8^2+2(7^2+...+1^2) = 344, |A|^3 = 512
    std::vector<long long> sid{0, 1, 2, 4, 8, 16};
    auto s = extended_pre_bsg(sid, 2, 1.0, {});
    CHECK(s.certified);
    auto big = extended_pre_bsg(ap, 3, 100.0, {});
    CHECK(big.certified);
    for (long long x : o.subset_z) CHECK(std::binary_search(ap.begin(), ap.end(), x));
}
