#include "apc/harmonic.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apc;

namespace {
RealFn random_fn(const GroupSpec& G, Rng& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    RealFn f(G);
    for (auto& x : f.v) x = U(rng);
    return f;
}
Subset random_set(const GroupSpec& G, Rng& rng, double dens) {
    Subset A;
    std::bernoulli_distribution B(dens);
    for (int x = 0; x < G.order(); ++x)
        if (B(rng)) A.push_back(x);
    if (A.empty()) A.push_back(0);
    return A;
}
}  // namespace

TEST_CASE("indicator densities") {
    auto Z5 = make_group({5});
    auto A = indicator_density(Z5, {0, 1});
    CHECK(A[0] == doctest::Approx(2.5));
    CHECK(A[2] == 0.0);
    CHECK(inf_norm(A) == doctest::Approx(2.5));
    CHECK(is_density(A));
    auto G = make_group({2, 2});
    Subset all{0, 1, 2, 3};
    for (double v : indicator_density(G, all).v) CHECK(v == 1.0);
    CHECK_THROWS_AS(indicator_density(G, {}), ApcError);
}

TEST_CASE("crosscorrelation of {0,1} in Z_5") {
    auto Z5 = make_group({5});
    auto A = indicator_density(Z5, {0, 1});
    auto AA = crosscorr(A, A);
    std::vector<double> want{2.5, 1.25, 0, 0, 1.25};
    for (int i = 0; i < 5; ++i) CHECK(AA[i] == doctest::Approx(want[i]).epsilon(1e-14));
    auto q = self_crosscorr_q(Z5, {0, 1});
    CHECK(q.v[0] == Rational(5, 2));
    CHECK(q.v[1] == Rational(5, 4));
    CHECK(q.v[4] == Rational(5, 4));
    CHECK(std::pow(knorm(AA, 2), 2) == doctest::Approx(15.0 / 8));
    auto R = rep_counts(Z5, {0, 1}, {0, 1}, RepKind::Difference);
    CHECK(R.counts == std::vector<long long>{2, 1, 0, 0, 1});
    long long e = 0;
    for (auto c : R.counts) e += c * c;
    CHECK(e == 6);
    CHECK(std::abs(central_moment(AA, uniform_density(Z5), 3) - 0.28125) < 1e-12);
    CHECK(central_moment_q(q, 3) == Rational(9, 32));
}

TEST_CASE("convolution against oracle and identities") {
    Rng rng(11);
    for (auto mod : std::vector<std::vector<int>>{{5}, {2, 3}, {4, 4}, {3, 3, 2}, {37}, {12}, {8, 9}}) {
        auto G = make_group(mod);
        auto f = random_fn(G, rng), g = random_fn(G, rng), h = random_fn(G, rng);
        auto c1 = oracle::conv(mod, f.v, g.v, false), c2 = oracle::conv(mod, f.v, g.v, true);
        auto n1 = convolve_naive(f, g), n2 = crosscorr_naive(f, g);
        auto q1 = convolve_fast(f, g), q2 = crosscorr_fast(f, g);
        for (int i = 0; i < G.order(); ++i) {
            CHECK(std::abs(n1[i] - c1[i]) < 1e-12);
            CHECK(std::abs(n2[i] - c2[i]) < 1e-12);
            CHECK(std::abs(q1[i] - c1[i]) < 1e-9);
            CHECK(std::abs(q2[i] - c2[i]) < 1e-9);
        }
        CHECK(std::abs(inner(convolve(f, g), h) - inner(f, crosscorr(g, h))) < 1e-10);
        auto S = fourier(f);
        auto O = oracle::dft(mod, f.v);
        for (int i = 0; i < G.order(); ++i) CHECK(std::abs(S.c[i] - O[i]) < 1e-9);
        auto back = inverse_fourier(S);
        for (int i = 0; i < G.order(); ++i) CHECK(std::abs(back[i] - f[i]) < 1e-9);
    }
}

TEST_CASE("density convolved with uniform is uniform; subspace self-correlation") {
    auto G = make_group({2, 2, 2});
    auto A = indicator_density(G, {0, 3, 5});
    for (double v : convolve(A, uniform_density(G)).v) CHECK(v == doctest::Approx(1.0));
    auto V = indicator_density(G, {0, 1, 2, 3});
    auto VV = crosscorr(V, V);
    for (int i = 0; i < 8; ++i) CHECK(VV[i] == doctest::Approx(V[i]));
}

TEST_CASE("knorm behaviour") {
    auto G = make_group({7});
    for (double k : {1.0, 2.0, 3.5, 8.0}) CHECK(knorm(uniform_density(G), k) == doctest::Approx(1.0));
    Rng rng(3);
    auto f = random_fn(G, rng);
    double prev = 0;
    for (double k = 1; k <= 12; k += 0.5) {
        double n = knorm(f, k);
        CHECK(n >= prev - 1e-10);
        prev = n;
    }
    auto D = indicator_density(G, {1, 2, 4});
    double l1 = 0;
    for (int i = 0; i < 7; ++i) l1 += D[i] * std::abs(f[i]) / 7;
    CHECK(weighted_knorm(f, 1, D) == doctest::Approx(l1));
    CHECK(weighted_knorm(f, 3, uniform_density(G)) == doctest::Approx(knorm(f, 3)));
    CHECK_THROWS_AS(knorm(f, 0.5), ApcError);
}

TEST_CASE("fourier examples") {
    auto G = make_group({6});
    auto S = fourier(uniform_density(G));
    CHECK(std::abs(S.c[0] - cd(1)) < 1e-12);
    for (int i = 1; i < 6; ++i) CHECK(std::abs(S.c[i]) < 1e-12);
    auto Z2 = make_group({2});
    auto A = indicator_density(Z2, {0});
    auto SA = fourier(A);
    CHECK(std::abs(SA.c[0] - cd(1)) < 1e-12);
    CHECK(std::abs(SA.c[1] - cd(1)) < 1e-12);
    CHECK(std::pow(knorm(A, 2), 2) == doctest::Approx(2.0));
    Spectrum P{G, std::vector<cd>(6, 0)};
    P.c[2] = 1;
    auto f = inverse_fourier(P);
    for (int x = 0; x < 6; ++x) CHECK(f[x] == doctest::Approx(std::conj(character_value(G, 2, x)).real()));
}

TEST_CASE("parseval and convolution theorem on random sets") {
    Rng rng(5);
    for (auto mod : std::vector<std::vector<int>>{{16, 16}, {3, 5, 7}, {2, 2, 2, 2, 2}, {64}}) {
        auto G = make_group(mod);
        auto A = indicator_density(G, random_set(G, rng, 0.3));
        auto B = indicator_density(G, random_set(G, rng, 0.5));
        auto SA = fourier(A), SB = fourier(B);
        double pars = 0;
        for (auto z : SA.c) pars += std::norm(z);
        CHECK(pars == doctest::Approx(std::pow(knorm(A, 2), 2)).epsilon(1e-12));
        auto SAB = fourier(convolve_naive(A, B));
        auto SX = fourier(crosscorr_naive(A, B));
        for (int i = 0; i < G.order(); ++i) {
            CHECK(std::abs(SAB.c[i] - SA.c[i] * SB.c[i]) < 1e-9);
            CHECK(std::abs(SX.c[i] - SA.c[G.neg(i)] * SB.c[i]) < 1e-9);
        }
    }
}

TEST_CASE("compress") {
    auto Z2 = make_group({2});
    RealFn D(Z2, std::vector<double>{1.5, 0.5});
    auto C = compress(D, 2);
    CHECK(C[0] == doctest::Approx(1.8));
    CHECK(C[1] == doctest::Approx(0.2));
    QFn Dq(Z2);
    Dq.v = {Rational(3, 2), Rational(1, 2)};
    auto Cq = compress(Dq, 2);
    CHECK(Cq.v[0] == Rational(9, 5));
    CHECK(Cq.v[1] == Rational(1, 5));
    auto C1 = compress(D, 1);
    CHECK(C1[0] == doctest::Approx(1.5));
    for (double v : compress(uniform_density(Z2), 5).v) CHECK(v == doctest::Approx(1.0));
    CHECK(inf_norm(compress(D, 3)) <= std::pow(1.5, 3) + 1e-12);
}

TEST_CASE("kdivergence") {
    std::vector<double> a{1.0 / 3, 1.0 / 3, 1.0 / 3, 0}, b{0.25, 0.25, 0.25, 0.25};
    CHECK(kdivergence(a, a, 2) == 0.0);
    CHECK(kdivergence(a, b, 1) == doctest::Approx(0.5));
    for (double k : {1.0, 2.0, 4.0, 16.0, 64.0}) CHECK(kdivergence(a, b, k) >= std::pow(0.25, 1.0 / k) - 1e-12);
    std::vector<Rational> qa{Rational(1, 3), Rational(1, 3), Rational(1, 3), 0}, qb(4, Rational(1, 4));
    CHECK(kdivergence_pow(qa, qb, 1) == Rational(1, 2));
    CHECK_THROWS_AS(kdivergence({1.0}, {0.5, 0.5}, 1), ApcError);
}

TEST_CASE("spectral positivity and square roots") {
    Rng rng(9);
    auto Z5 = make_group({5});
    RealFn c(Z5);
    for (int x = 0; x < 5; ++x) c[x] = character_value(Z5, 1, x).real();
    CHECK(spectral_positivity_report(c).is_positive);  // 1/2 at alpha = 1 and alpha = -1
    RealFn s(Z5);
    for (int x = 0; x < 5; ++x) s[x] = character_value(Z5, 1, x).real() - 0.5;
    CHECK_FALSE(spectral_positivity_report(s).is_positive);
    for (auto mod : std::vector<std::vector<int>>{{5}, {4, 4}, {2, 2, 2}, {30}}) {
        auto G = make_group(mod);
        auto A = indicator_density(G, random_set(G, rng, 0.4));
        auto AA = crosscorr(A, A);
        CHECK(spectral_positivity_report(AA).is_positive);
        CHECK(spectral_positivity_report(add_const(AA, -1)).is_positive);
        auto g = spectral_sqrt(AA);
        auto back = crosscorr(g, g);
        for (int i = 0; i < G.order(); ++i) CHECK(std::abs(back[i] - AA[i]) <= 1e-8);
    }
    auto G = make_group({2, 2});
    auto V = indicator_density(G, {0, 1});
    auto gV = spectral_sqrt(V);
    auto VV = crosscorr(gV, gV);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(VV[i] - V[i]) <= 1e-8);
    auto u = spectral_sqrt(uniform_density(G));
    for (double v : u.v) CHECK(v == doctest::Approx(1.0));
    CHECK_THROWS_AS(spectral_sqrt(s), ApcError);
}

TEST_CASE("law examples") {
    auto G = make_group({2, 2});
    LawInputs in;
    in.fns = {uniform_density(G), uniform_density(G)};
    in.k = 2;
    auto r = law_check("decoupling", in);
    CHECK(r.lhs == doctest::Approx(0.0));
    CHECK(r.rhs == doctest::Approx(0.0));
    CHECK(r.holds);
    auto Z5 = make_group({5});
    auto A = indicator_density(Z5, {0, 1});
    in.fns = {crosscorr(A, A)};
    in.k = 3;
    r = law_check("odd_central_moments", in);
    CHECK(r.holds);
    auto V = indicator_density(G, {0, 1});
    in.fns = {V, V};
    r = law_check("positive_correlation", in);
    CHECK(r.lhs == doctest::Approx(2.0));
    CHECK(r.rhs == doctest::Approx(1.0));
    CHECK(r.holds);
    CHECK_THROWS_AS(law_check("nope", in), ApcError);
    in.k = 3;
    in.fns = {V, V};
    CHECK_THROWS_AS(law_check("decoupling", in), ApcError);
}

TEST_CASE("randomized laws") {
    Rng rng(21);
    for (int t = 0; t < 40; ++t) {
        auto G = make_group({static_cast<int>(3 + rng() % 20)});
        auto A = indicator_density(G, random_set(G, rng, 0.3));
        auto B = indicator_density(G, random_set(G, rng, 0.5));
        auto Cb = indicator_density(G, random_set(G, rng, 0.5));
        LawInputs in;
        in.fns = {A, B};
        for (int k : {2, 4, 6}) {
            in.k = k;
            CHECK(law_check("decoupling", in).holds);
        }
        in.fns = {random_fn(G, rng)};
        in.k = 4;
        CHECK(law_check("fourier_knorm", in).holds);
        auto D = crosscorr(Cb, Cb);
        in.fns = {random_fn(G, rng), random_fn(G, rng), D};
        in.theta = static_cast<int>(rng() % G.order());
        CHECK(law_check("local_decoupling", in).holds);
        in.fns = {A, D};
        in.k = 2;
        auto r = law_check("local_upper_to_lower", in);
        CHECK(r.holds);
        in.fns = {crosscorr(A, A)};
        in.eps = 0;
        r = law_check("odd_moments_bound", in);
        CHECK(r.holds);
        in.fns = {A};
        in.k = 3;
        in.eps = 0.3;
        in.c = 0.5;
        CHECK(law_check("compressions_escape", in).holds);
        in.fns = {crosscorr(A, A), crosscorr(B, B)};
        in.eps = 0;
        CHECK(law_check("bs_infnorm", in).holds);
    }
}

TEST_CASE("khintchine exact small case") {
    auto G = make_group({4});
    LawInputs in;
    in.fns = {RealFn(G, std::vector<double>{1, 0, 2, 0}), RealFn(G, std::vector<double>{0, 3, 0, 1}),
              RealFn(G, std::vector<double>{1, 1, 1, 1})};
    in.k = 4;
    in.ell = 3;
    auto r = law_check("khintchine", in);
    CHECK(r.holds);
    CHECK(r.note == "exact expectation");
}
