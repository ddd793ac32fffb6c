#include "apc/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>

#include "apc/bohr.hpp"
#include "apc/io.hpp"
#include "apc/spread.hpp"
#include "apc/threeap.hpp"

namespace apc {

using nlohmann::json;

namespace {

double now() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

class Suite {
public:
    Suite(std::string id, const SuiteOptions& opt) : id_(std::move(id)), opt_(opt) {
        budget_ = opt.size_budget > 0 ? opt.size_budget : size_budget();
        rep.command = "verify --suite " + id_;
        rep.seed = opt.seed;
        rep.config = {{"suite", id_}, {"seed", opt.seed}, {"size_budget", budget_}, {"scale", opt.scale}};
    }

    Check& check(const std::string& id, bool assertable = true) {
        auto it = index_.find(id);
        if (it != index_.end()) return rep.checks[it->second];
        index_[id] = rep.checks.size();
        rep.checks.push_back(Check{});
        rep.checks.back().id = id;
        rep.checks.back().assertable = assertable;
        return rep.checks.back();
    }

    void tally(const std::string& id, bool ok, double margin, const std::string& where) {
        Check& c = check(id);
        ++c.instances;
        if (std::isfinite(margin)) c.worst = std::min(c.worst, margin);
        if (!ok) {
            ++c.failures;
            if (c.detail.empty()) c.detail = where;
        }
    }
    // |lhs - rhs| <= tol, relative to max(1, |rhs|)
    void close(const std::string& id, double lhs, double rhs, const std::string& where, double tol = 1e-9) {
        double err = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        tally(id, err <= tol, tol - err, where);
    }
    void skip(const std::string& id) { ++check(id).skipped; }
    // at least `rate` of the instances succeed
    void rate(const std::string& id, long long ok, long long total, double need) {
        Check& c = check(id);
        c.instances = total;
        c.failures = total - ok;
        double r = total ? static_cast<double>(ok) / total : 0;
        c.worst = r - need;
        c.detail = std::to_string(ok) + "/" + std::to_string(total) + " succeeded, need " + std::to_string(need);
        if (r + 1e-12 >= need) c.failures = 0;
    }

    long long n(long long base) const { return std::max(1LL, std::llround(base * opt_.scale)); }
    Rng rng(const std::string& stage) const { return Rng(stage_seed(opt_.seed, id_ + "/" + stage)); }
    uint64_t seed(const std::string& stage) const { return stage_seed(opt_.seed, id_ + "/" + stage); }
    bool fits(long long order) const { return order <= budget_; }
    double scale() const { return opt_.scale; }

    ExperimentReport rep;

private:
    std::string id_;
    SuiteOptions opt_;
    long long budget_ = 0;
    std::map<std::string, size_t> index_;
};

// ---- random instances ----

GroupSpec pick(Rng& rng, const std::vector<std::vector<int>>& shapes) {
    return make_group(shapes[rng() % shapes.size()]);
}

Subset random_set(const GroupSpec& G, Rng& rng, double dens) {
    Subset A;
    std::bernoulli_distribution B(dens);
    for (int x = 0; x < G.order(); ++x)
        if (B(rng)) A.push_back(x);
    if (A.empty()) A.push_back(static_cast<int>(rng() % G.order()));
    return A;
}

RealFn random_fn(const GroupSpec& G, Rng& rng) {
    RealFn f(G);
    std::uniform_real_distribution<double> U(-1, 1);
    for (double& v : f.v) v = U(rng);
    return f;
}

RealFn dyadic_fn(const GroupSpec& G, Rng& rng) {
    RealFn f(G);
    for (double& v : f.v) v = static_cast<double>(rng() % 5) / 4;
    return f;
}

DensityFn random_density(const GroupSpec& G, Rng& rng) {
    RealFn f(G);
    double s = 0;
    for (double& v : f.v) s += v = static_cast<double>(rng() % 4);
    if (s == 0) return uniform_density(G);
    for (double& v : f.v) v *= G.order() / s;
    return f;
}

Subset all_of(const GroupSpec& G) {
    Subset s(G.order());
    for (int i = 0; i < G.order(); ++i) s[i] = i;
    return s;
}

std::string where(const GroupSpec& G, int t) { return G.describe() + " instance " + std::to_string(t); }

double max_abs_diff(const RealFn& a, const RealFn& b) {
    double m = 0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

bool le_exact(const std::string& lhs, const std::string& rhs, double l, double r) {
    if (!lhs.empty() && !rhs.empty()) return Rational(lhs) <= Rational(rhs);
    return l <= r + kTol;
}

// ---- suites ----

void fourier_suite(Suite& s) {
    const std::vector<std::vector<int>> shapes{{2},    {3},       {5},       {8},          {12},      {16},
                                               {2, 2}, {2, 2, 2, 2}, {3, 3},  {4, 6},       {2, 3, 5}, {5, 5},
                                               {7, 7}, {64},      {100},     {2, 2, 2, 2, 2, 2}, {3, 3, 3, 3},
                                               {128},  {16, 16},  {256},     {4, 4, 4, 4}};
    Rng rng = s.rng("functions");
    const long long T = s.n(500);
    for (long long t = 0; t < T; ++t) {
        GroupSpec G = pick(rng, shapes);
        if (!s.fits(G.order())) {
            s.skip("parseval");
            continue;
        }
        const std::string w = where(G, static_cast<int>(t));
        RealFn f = random_fn(G, rng), g = random_fn(G, rng), h = random_fn(G, rng);
        Spectrum F = fourier(f), Gs = fourier(g), H = fourier(h);
        const int n = G.order();
        double sq = 0, quart = 0;
        for (const cd& z : F.c) {
            sq += std::norm(z);
            quart += std::norm(z) * std::norm(z);
        }
        s.close("parseval", inner(f, f), sq, w);
        s.tally("inversion", max_abs_diff(inverse_fourier(F), f) <= 1e-9,
                1e-9 - max_abs_diff(inverse_fourier(F), f), w);
        Spectrum prod{G, std::vector<cd>(n)}, cross{G, std::vector<cd>(n)}, self{G, std::vector<cd>(n)};
        cd ip1 = 0, ip2 = 0;
        for (int a = 0; a < n; ++a) {
            prod.c[a] = F.c[a] * Gs.c[a];
            cross.c[a] = F.c[G.neg(a)] * Gs.c[a];
            self.c[a] = std::norm(F.c[a]);
            ip1 += F.c[G.neg(a)] * H.c[a];
            ip2 += F.c[a] * H.c[G.neg(a)];
        }
        RealFn fg = convolve(f, g), fsg = crosscorr(f, g), ff = crosscorr(f, f);
        s.close("identity_inner", inner(f, h), ip1.real(), w);
        s.close("identity_inner_reflected", inner(f, h), ip2.real(), w);
        double d2 = max_abs_diff(fg, inverse_fourier(prod));
        s.tally("convolution_theorem", d2 <= 1e-9, 1e-9 - d2, w);
        Spectrum FG = fourier(fg);
        double dspec = 0;
        for (int a = 0; a < n; ++a) dspec = std::max(dspec, std::abs(FG.c[a] - prod.c[a]));
        s.tally("convolution_spectrum", dspec <= 1e-9, 1e-9 - dspec, w);
        double d3 = max_abs_diff(fsg, inverse_fourier(cross));
        s.tally("crosscorr_theorem", d3 <= 1e-9, 1e-9 - d3, w);
        double d4 = max_abs_diff(ff, inverse_fourier(self));
        s.tally("self_crosscorr", d4 <= 1e-9, 1e-9 - d4, w);
        s.close("selfcorr_l2", inner(ff, ff), quart, w);
        s.close("adjoint", inner(fg, h), inner(f, crosscorr(g, h)), w);
        double dfast = std::max(max_abs_diff(convolve_fast(f, g), convolve_naive(f, g)),
                                max_abs_diff(crosscorr_fast(f, g), crosscorr_naive(f, g)));
        s.tally("fast_matches_naive", dfast <= 1e-9, 1e-9 - dfast, w);
        if (n <= 64) {
            Subset A = random_set(G, rng, 0.4), B = random_set(G, rng, 0.4), C = random_set(G, rng, 0.4);
            QFn Aq = indicator_density_q(G, A), Bq = indicator_density_q(G, B), Cq = indicator_density_q(G, C);
            Rational l = inner(convolve(Aq, Bq), Cq), r = inner(Aq, crosscorr(Bq, Cq));
            s.tally("adjoint_exact", l == r, 0, w);
        }
    }
}

void sifting_suite(Suite& s) {
    const std::vector<std::vector<int>> shapes{{4},  {5},       {6},    {7},          {8},    {9},  {10},
                                               {12}, {16},      {2, 2, 2}, {2, 2, 2, 2}, {3, 3}, {2, 4}, {32},
                                               {64}, {4, 4},    {2, 2, 2, 2, 2, 2}};
    SearchBudget b;
    auto judge = [&](const std::string& id, const SiftOutcome& o, const std::string& w) {
        if (o.vacuous) {
            s.skip(id);
            return;
        }
        bool sizes = true;
        if (o.variant == "local") {
            double prod = 1;
            for (long long a : o.achieved_sizes) prod *= static_cast<double>(a);
            sizes = prod >= o.guarantee_sizes.at(0) - 1e-12;
        } else {
            for (size_t i = 0; i < o.achieved_sizes.size() && i < o.guarantee_sizes.size(); ++i)
                sizes = sizes && static_cast<double>(o.achieved_sizes[i]) >= o.guarantee_sizes[i] - 1e-12;
        }
        bool ratio = le_exact(o.achieved_ratio_exact, o.guarantee_ratio_exact, o.achieved_ratio, o.guarantee_ratio);
        s.tally(id, o.certified && sizes && ratio, o.guarantee_ratio - o.achieved_ratio, w);
    };
    Rng rng = s.rng("instances");
    const long long T = s.n(200);
    for (long long t = 0; t < T; ++t) {
        GroupSpec G = pick(rng, shapes);
        const int k = 2 + static_cast<int>(rng() % 2);
        const std::string w = where(G, static_cast<int>(t)) + " k=" + std::to_string(k);
        Subset A = random_set(G, rng, 0.5), B = random_set(G, rng, 0.5), C = random_set(G, rng, 0.5);
        RealFn f = dyadic_fn(G, rng);
        judge("sift_self", sift_self(G, A, f, k, b), w);
        judge("sift_pair", sift_pair(G, A, B, f, k, b), w);
        judge("sift_local", sift_local(G, A, B, C, f, k, b), w);
    }
    // every subset of Z_N for N <= 12 (strided when scaled down)
    const unsigned stride = s.scale() >= 1 ? 1 : static_cast<unsigned>(std::ceil(1 / s.scale()));
    for (int N = 2; N <= 12; ++N) {
        GroupSpec G = make_group({N});
        for (unsigned mask = 1; mask < (1u << N); mask += stride) {
            Subset A;
            for (int i = 0; i < N; ++i)
                if (mask >> i & 1) A.push_back(i);
            for (int k = 1; k <= 3; ++k)
                s.tally("power_identity", power_identity_holds(G, A, k), 0,
                        "Z_" + std::to_string(N) + " mask " + std::to_string(mask) + " k=" + std::to_string(k));
        }
    }
}

void spectral_suite(Suite& s) {
    const std::vector<std::vector<int>> shapes{{5},  {7},       {8},    {12}, {16},   {2, 2, 2, 2},
                                               {3, 3}, {25},    {32},   {4, 4}, {64}, {2, 2, 2, 2, 2}};
    Rng rng = s.rng("sets");
    const long long T = s.n(500);
    for (long long t = 0; t < T; ++t) {
        GroupSpec G = pick(rng, shapes);
        const std::string w = where(G, static_cast<int>(t));
        Subset A = random_set(G, rng, 0.1 + 0.8 * static_cast<double>(rng() % 100) / 100);
        RealFn AA = crosscorr(indicator_density(G, A), indicator_density(G, A));
        auto p1 = spectral_positivity_report(AA), p2 = spectral_positivity_report(add_const(AA, -1));
        s.tally("positivity", p1.is_positive, p1.min_real, w);
        s.tally("positivity_centered", p2.is_positive, p2.min_real, w);
        QFn AAq = self_crosscorr_q(G, A);
        Rational lo = 0;
        bool ok = true;
        for (int j = 1; j <= 7; j += 2) {
            Rational m = central_moment_q(AAq, j);
            if (j == 1 || m < lo) lo = m;
            ok = ok && m >= 0;
        }
        s.tally("odd_central_moments_exact", ok, lo.get_d(), w);
    }
    Rng drng = s.rng("densities");
    for (long long t = 0; t < T; ++t) {
        GroupSpec G = pick(drng, shapes);
        const std::string w = where(G, static_cast<int>(t));
        DensityFn A, B;
        if (t % 2) {
            A = indicator_density(G, random_set(G, drng, 0.4));
            B = indicator_density(G, random_set(G, drng, 0.4));
        } else {
            A = random_density(G, drng);
            B = random_density(G, drng);
        }
        LawInputs in;
        in.fns = {A, B};
        for (int k : {2, 4, 6}) {
            in.k = k;
            auto r = law_check("decoupling", in);
            s.tally("decoupling", r.holds, r.margin, w + " k=" + std::to_string(k));
        }
        DensityFn C = indicator_density(G, random_set(G, drng, 0.5));
        DensityFn D = crosscorr(C, C);
        LawInputs ld;
        ld.fns = {random_fn(G, drng), random_fn(G, drng), D};
        ld.theta = static_cast<int>(drng() % G.order());
        for (int k : {2, 4, 6}) {
            ld.k = k;
            auto r = law_check("local_decoupling", ld);
            s.tally("local_decoupling", r.holds, r.margin, w + " k=" + std::to_string(k));
        }
        LawInputs lu;
        lu.fns = {A, D};
        for (int k : {2, 4}) {
            lu.k = k;
            try {
                auto r = law_check("local_upper_to_lower", lu);
                s.tally("local_upper_to_lower", r.holds, r.margin, w + " k=" + std::to_string(k));
            } catch (const ApcError&) {
                s.skip("local_upper_to_lower");
            }
        }
    }
    Rng xrng = s.rng("odd_moments");
    const long long X = s.n(200);
    for (long long t = 0; t < X; ++t) {
        GroupSpec G = pick(xrng, shapes);
        Subset A = random_set(G, xrng, 0.15 + 0.5 * static_cast<double>(xrng() % 100) / 100);
        if (static_cast<int>(A.size()) == G.order()) A.pop_back();
        if (A.empty()) A.push_back(0);
        LawInputs in;
        in.fns = {crosscorr(indicator_density(G, A), indicator_density(G, A))};
        in.k = 2 + 2 * static_cast<int>(xrng() % 2);
        try {
            auto r = law_check("odd_moments_bound", in);
            s.tally("odd_moments_bound", r.holds, r.margin, where(G, static_cast<int>(t)));
        } catch (const ApcError&) {
            s.skip("odd_moments_bound");
        }
    }
}

void bohr_suite(Suite& s) {
    // every modulus up to 2000; scaled-down runs stride through them
    std::vector<int> Ns;
    const int stride = s.scale() >= 1 ? 1 : static_cast<int>(std::ceil(1 / s.scale()));
    for (int N = 2; N <= 2000; N += N <= 40 ? 1 : stride) Ns.push_back(N);
    if (Ns.back() != 2000) Ns.push_back(2000);
    const long long per = s.n(50);
    long long reg_ok = 0, reg_total = 0;
    Rng brng = s.rng("bohr_sets");
    for (int N : Ns) {
        if (!s.fits(N)) {
            s.skip("size_lower");
            continue;
        }
        GroupSpec G = make_group({N});
        for (long long t = 0; t < per; ++t) {
            const int r = 1 + static_cast<int>(brng() % 3);
            Subset gam;
            for (int i = 0; i < r; ++i) gam.push_back(static_cast<int>(brng() % N));
            std::sort(gam.begin(), gam.end());
            gam.erase(std::unique(gam.begin(), gam.end()), gam.end());
            const double rho = 2.0 * static_cast<double>(1 + brng() % 1000) / 1000;
            BohrSet B{G, gam, rho};
            const std::string w = "Z_" + std::to_string(N) + " rank " + std::to_string(gam.size()) +
                                  " rho " + std::to_string(rho);
            auto e = size_estimates(B);
            s.tally("size_lower", e.lower_holds, static_cast<double>(e.size) - e.lower, w);
            s.tally("size_doubling", e.doubling_holds, e.doubling - static_cast<double>(e.size2), w);
            bool dil = true, sums = true;
            double dm = std::numeric_limits<double>::infinity();
            std::string dw;
            for (const auto& d : e.dilates) {
                if (!d.holds && dw.empty()) dw = w + " delta " + std::to_string(d.delta);
                dil = dil && d.holds;
                sums = sums && d.sumset_inclusion;
                dm = std::min(dm, static_cast<double>(d.size) - d.bound);
            }
            s.tally("size_dilate", dil, dm, dw.empty() ? w : dw);
            s.tally("sumset_inclusion", sums, 0, w);
            Subset mem = bohr_members(B);
            bool sym = std::binary_search(mem.begin(), mem.end(), 0);
            for (int x : mem) sym = sym && std::binary_search(mem.begin(), mem.end(), G.neg(x));
            s.tally("symmetric_with_zero", sym, 0, w);
            if (t < 4) {
                auto rg = regularize(B);
                ++reg_total;
                reg_ok += rg.delta_star.has_value();
            }
        }
        auto ib = interval_as_bohr(N, static_cast<double>(1 + brng() % 1000) / 1000);
        s.tally("interval_members", ib.members_match, 0, "Z_" + std::to_string(N));
        s.tally("interval_sandwich", ib.sandwich_holds, std::min(ib.ratio - ib.lo, ib.hi - ib.ratio),
                "Z_" + std::to_string(N) + " rho " + std::to_string(ib.B.rho) + " m " + std::to_string(ib.m));
    }
    s.rate("regularize_rate", reg_ok, reg_total, 0.95);
    s.check("regularize_rate").detail += "; regularity is checked on a 64-point grid plus breakpoints";
}

void freiman_suite(Suite& s) {
    Rng rng = s.rng("intervals");
    for (long long N = 5; N <= 60; ++N)
        for (int t = 1; t <= 4; ++t) {
            const long long m = (N - 1) / t;
            if (m < 1) continue;
            const long long a = 1 + static_cast<long long>(rng() % (N - m));
            FreimanMap phi;
            phi.dom.moduli = {0};
            phi.cod.moduli = {N};
            for (long long x = a; x <= a + m; ++x) {
                phi.x.push_back(Point{x});
                phi.y.push_back(Point{x % N});
            }
            auto c = check_freiman(phi, t);
            s.tally("interval_embedding", c.verified && c.exhaustive, 0,
                    "N=" + std::to_string(N) + " t=" + std::to_string(t));
        }
    for (long long N = 3; N <= 40; ++N) {
        FreimanMap phi;
        phi.dom.moduli = {0};
        phi.cod.moduli = {N};
        for (long long x : {1LL, N - 1, N}) {
            phi.x.push_back(Point{x});
            phi.y.push_back(Point{x % N});
        }
        auto c = check_freiman(phi, 2);
        s.tally("zn_counterexample", !c.verified && c.counterexample.has_value(), 0, "N=" + std::to_string(N));
    }
    for (long long N = 2; N <= 40; ++N)
        for (double delta : {0.25, 1.0 / 3, 0.5}) {
            long long m = static_cast<long long>(std::floor(delta * N + 1e-12));
            if (m < 1) continue;
            for (int t : {2, static_cast<int>(std::floor(1 / delta + 1e-12))}) {
                auto r = safe_box({N}, delta, {m}, t, 1 << 20);
                s.tally("safe_box_rank1", r.certified && r.exhaustive, 0,
                        "N=" + std::to_string(N) + " delta=" + std::to_string(delta) + " t=" + std::to_string(t));
            }
        }
    // all pairs 4 <= N1 <= N2 <= 40; swapping coordinates maps one instance onto the other
    const long long pstride = s.scale() >= 1 ? 1 : std::llround(std::ceil(1 / s.scale()));
    long long pi = 0;
    for (long long N1 = 4; N1 <= 40; ++N1)
        for (long long N2 = N1; N2 <= 40; ++N2) {
            if (pi++ % pstride) continue;
            auto r = safe_box({N1, N2}, 0.25, {N1 / 4, N2 / 4}, 2, 1 << 20);
            s.tally("safe_box_rank2", r.certified && r.exhaustive, 0,
                    "N=(" + std::to_string(N1) + "," + std::to_string(N2) + ")");
        }
    // t-homomorphisms restrict to t' < t
    for (long long N = 7; N <= 30; ++N) {
        FreimanMap phi;
        phi.dom.moduli = {0};
        phi.cod.moduli = {N};
        for (long long x = 0; x <= (N - 1) / 3; ++x) {
            phi.x.push_back(Point{x});
            phi.y.push_back(Point{x % N});
        }
        bool ok = true;
        for (int t = 3; t >= 1; --t) ok = ok && check_freiman(phi, t).verified;
        s.tally("downward_closed", ok, 0, "N=" + std::to_string(N));
    }
}

void smoothing_suite(Suite& s) {
    Rng rng = s.rng("instances");
    const long long T = s.n(100);
    for (long long t = 0; t < T; ++t) {
        const bool cyclic = t % 2 == 0;
        const long long N = 5 + static_cast<long long>(rng() % 26);
        Space sp{{cyclic ? N : 0}};
        auto rnd = [&](long long lo, long long hi, int count) {
            std::set<long long> v;
            while (static_cast<int>(v.size()) < count) v.insert(lo + static_cast<long long>(rng() % (hi - lo + 1)));
            std::vector<Point> out;
            for (long long x : v) out.push_back(Point{x});
            return out;
        };
        const long long hi = cyclic ? N - 1 : 12;
        auto A = rnd(0, hi, 1 + static_cast<int>(rng() % 4));
        auto B = rnd(0, hi, 1 + static_cast<int>(rng() % 4));
        std::set<Point> S;
        for (const Point& a : A)
            for (const Point& b : B) S.insert(sp.sub(a, b));
        for (const Point& e : rnd(cyclic ? 0 : -hi, hi, 1 + static_cast<int>(rng() % 3))) S.insert(sp.reduce(e));
        std::vector<Rational> nu;
        long long tot = 0;
        std::vector<long long> w;
        for (size_t i = 0; i < B.size(); ++i) {
            w.push_back(1 + static_cast<long long>(rng() % 5));
            tot += w.back();
        }
        for (long long x : w) nu.push_back(frac(static_cast<long>(x), static_cast<long>(tot)));
        std::vector<std::pair<Point, double>> f;
        for (long long x = cyclic ? 0 : -3 * hi; x <= (cyclic ? N - 1 : 3 * hi); ++x)
            f.emplace_back(Point{x}, static_cast<double>(rng() % 7));
        auto r = smoothing_check(sp, A, B, std::vector<Point>(S.begin(), S.end()), nu, f);
        const std::string wh = std::string(cyclic ? "Z_" + std::to_string(N) : "Z") + " instance " + std::to_string(t);
        s.tally("smoothing_identity", r.identity_holds, 0, wh);
        if (r.one_sided_holds) s.tally("one_sided", *r.one_sided_holds, r.lhs - r.rhs, wh);
        else s.skip("one_sided");
    }
    Rng brng = s.rng("bohr");
    const long long R = s.n(30);
    for (long long t = 0; t < R; ++t) {
        const int N = 50 + static_cast<int>(brng() % 250);
        GroupSpec G = make_group({N});
        const int r = 1 + static_cast<int>(brng() % 2);
        Subset gam;
        for (int i = 0; i < r; ++i) gam.push_back(1 + static_cast<int>(brng() % (N - 1)));
        std::sort(gam.begin(), gam.end());
        gam.erase(std::unique(gam.begin(), gam.end()), gam.end());
        BohrSet B0{G, gam, 0.3 + static_cast<double>(brng() % 100) / 100};
        auto reg = regularize(B0);
        const std::string w = "Z_" + std::to_string(N) + " instance " + std::to_string(t);
        if (!reg.delta_star) {
            s.skip("bohr_smoothing");
            continue;
        }
        BohrSet B = dilate(B0, *reg.delta_star);
        const double delta = static_cast<double>(1 + brng() % 100) / 100 / (12.0 * B.rank());
        RealFn f(G);
        for (double& v : f.v) v = static_cast<double>(brng() % 5);
        auto bs = bohr_smoothing_check(B, delta, f);
        s.tally("bohr_smoothing", bs.holds, bs.lhs - bs.rhs, w);
    }
}

long long aps_brute(const std::vector<long long>& A) {
    long long c = 0;
    for (long long x : A)
        for (long long y : A)
            for (long long z : A)
                if (x != y && x + y == 2 * z) ++c;
    return c;
}

void counting_suite(Suite& s) {
    for (unsigned mask = 0; mask < (1u << 12); ++mask) {
        std::vector<long long> A;
        for (int i = 0; i < 12; ++i)
            if (mask >> i & 1) A.push_back(i + 1);
        auto c = count_3aps(A);
        s.tally("oracle_small", c.nontrivial == aps_brute(A) && c.trivial == static_cast<long long>(A.size()), 0,
                "mask " + std::to_string(mask));
    }
    Rng rng = s.rng("random_sets");
    const long long T = s.n(200);
    for (long long t = 0; t < T; ++t) {
        const long long N = 50 + static_cast<long long>(rng() % 450);
        const int size = 20 + static_cast<int>(rng() % 100);
        std::set<long long> v;
        while (static_cast<int>(v.size()) < size && static_cast<long long>(v.size()) < N)
            v.insert(1 + static_cast<long long>(rng() % N));
        std::vector<long long> A(v.begin(), v.end());
        s.tally("oracle_random", count_3aps(A).nontrivial == aps_brute(A), 0, "instance " + std::to_string(t));
    }
    for (auto shape : std::vector<std::vector<int>>{{3, 3}, {5, 5}, {3, 3, 3}, {7, 7}, {3, 3, 3, 3}}) {
        GroupSpec G = make_group(shape);
        const long long n = G.order();
        s.tally("full_space", count_3aps(G, all_of(G)).total == n * n, 0, G.describe());
    }
    const int m9 = max_3ap_free_interval(9), f32 = max_3ap_free_group(make_group({3, 3})),
              f33 = max_3ap_free_group(make_group({3, 3, 3}));
    s.tally("max_free_interval_9", m9 == 5, m9 - 5, "got " + std::to_string(m9));
    s.tally("max_free_F3_2", f32 == 4, f32 - 4, "got " + std::to_string(f32));
    s.tally("max_free_F3_3", f33 == 9, f33 - 9, "got " + std::to_string(f33));
    // every N up to 10^4; scaled-down runs stride above 300
    std::vector<long long> Ns;
    const long long step = s.scale() >= 1 ? 1 : std::llround(std::ceil(1 / s.scale()));
    for (long long N = 2; N <= 10000; N += N < 300 ? 1 : step) Ns.push_back(N);
    if (Ns.back() != 10000) Ns.push_back(10000);
    json dens = json::array();
    for (long long N : Ns) {
        auto b = behrend_set(N);
        s.tally("behrend_free", b.certified, 0, "N=" + std::to_string(N));
        if (b.radius2 < 0 && N >= 5 && N % 97 == 0) s.tally("behrend_sphere_free", behrend_sphere(N).certified, 0, "N=" + std::to_string(N));
        if (N == 10 || N == 100 || N == 1000 || N == 10000)
            dens.push_back({{"N", N}, {"size", b.set.size()}, {"density", b.density}, {"dim", b.dim}});
    }
    s.rep.stages.push_back({{"stage", "behrend_densities"}, {"values", dens}});
}

void appendix_suite(Suite& s) {
    Rng rng = s.rng("chang");
    const long long T = s.n(200);
    for (long long t = 0; t < T; ++t) {
        GroupSpec G = make_group(t % 2 ? std::vector<int>{2, 2, 2, 2} : std::vector<int>{2, 2, 2, 2, 2});
        Subset A = random_set(G, rng, 0.1 + 0.5 * static_cast<double>(rng() % 100) / 100);
        const double eps = rng() % 2 ? 0.25 : 0.5;
        auto c = chang_check(G, A, eps);
        s.tally("chang", c.holds, c.bound - static_cast<double>(c.independent.size()), where(G, static_cast<int>(t)));
    }
    const std::vector<std::vector<int>> cs_shapes{{16}, {32}, {64}, {2, 2, 2, 2}, {2, 2, 2, 2, 2}, {4, 4}, {8, 8}};
    Rng crng = s.rng("croot_sisask");
    const long long C = s.n(100);
    long long cs_ok = 0;
    for (long long t = 0; t < C; ++t) {
        GroupSpec G = pick(crng, cs_shapes);
        Subset A = random_set(G, crng, 0.5);
        RealFn f(G);
        for (double& v : f.v) v = crng() % 2 ? 1.0 : 0.0;
        auto r = croot_sisask(G, A, f, 2, 0.5, 40, s.seed("croot_sisask/" + std::to_string(t)));
        cs_ok += r.certified && !r.S.empty();
    }
    s.rate("croot_sisask_rate", cs_ok, C, 0.95);
    Rng krng = s.rng("khintchine");
    for (long long t = 0; t < s.n(50); ++t) {
        const int m = 4 + static_cast<int>(krng() % 5), P = 3 + static_cast<int>(krng() % 4);
        GroupSpec G = make_group({m});
        LawInputs in;
        for (int i = 0; i < P; ++i) {
            RealFn v(G);
            for (double& x : v.v) x = static_cast<double>(krng() % 6);
            in.fns.push_back(v);
        }
        in.k = 2 + 2 * static_cast<int>(krng() % 2);
        in.ell = 1 + static_cast<int>(krng() % 4);
        in.samples = 4000;
        in.seed = s.seed("khintchine/" + std::to_string(t));
        auto r = law_check("khintchine", in);
        s.tally("khintchine", r.holds, r.margin, "instance " + std::to_string(t));
    }
    const std::vector<std::vector<int>> rm_shapes{{2, 2, 2, 2}, {2, 2, 2, 2, 2}, {3, 3}, {3, 3, 3}, {16}};
    Rng rrng = s.rng("roth_meshulam");
    for (long long t = 0; t < T; ++t) {
        GroupSpec G = pick(rrng, rm_shapes);
        Subset A = random_set(G, rrng, 0.5), B = random_set(G, rrng, 0.5), Cs = random_set(G, rrng, 0.5);
        auto r = roth_meshulam_stats(G, A, B, Cs);
        const std::string w = where(G, static_cast<int>(t));
        s.tally("rm_bound2", r.bound2_holds, r.rhs_l2 - std::abs(r.star - 1), w);
        if (r.bound1_holds) s.tally("rm_bound1", *r.bound1_holds, 0, w);
    }
    for (int n : {3, 4, 5})
        for (int d = 1; d < n; ++d) {
            GroupSpec G = make_group(std::vector<int>(n, 2));
            auto [A, B] = rm_counterexample(G, d);
            Rational v = star_value(G, A, B, B);
            double sup = inf_norm(indicator_density(G, A)), want = 1 / (1 - std::pow(2.0, -d));
            s.tally("rm_counterexample", v == 0 && std::abs(sup - want) < 1e-12, 0,
                    "n=" + std::to_string(n) + " d=" + std::to_string(d));
        }
    // sup-norm bound for convolutions of rational densities within 1 +- eps
    Rng brng = s.rng("bs_infnorm");
    for (long long t = 0; t < s.n(100); ++t) {
        GroupSpec G = make_group({4 + static_cast<int>(brng() % 29)});
        const Rational eps = frac(1 + static_cast<long>(brng() % 4), 4);
        auto make = [&]() {
            std::vector<long long> w(G.order());
            long long tot = 0;
            for (auto& x : w) tot += x = static_cast<long long>(brng() % 9) - 4;
            QFn D(G);
            Rational mean = frac(static_cast<long>(tot), G.order()), M = 0;
            for (int i = 0; i < G.order(); ++i) M = std::max(M, Rational(abs(Rational(static_cast<long>(w[i])) - mean)));
            for (int i = 0; i < G.order(); ++i) D.v[i] = M == 0 ? Rational(1) : Rational(1 + eps * (Rational(static_cast<long>(w[i])) - mean) / M);
            return D;
        };
        QFn D = make(), D2 = make();
        QFn conv = convolve(D, D2);
        Rational worst = 0;
        for (const auto& x : conv.v) worst = std::max(worst, Rational(abs(x - 1)));
        s.tally("bs_infnorm_exact", worst <= eps, Rational(eps - worst).get_d(), where(G, static_cast<int>(t)));
    }
}

std::vector<long long> greedy_free(long long lo, long long hi, long long start) {
    std::vector<long long> order;
    for (long long x = start; x <= hi; ++x) order.push_back(x);
    for (long long x = start - 1; x >= lo; --x) order.push_back(x);
    std::set<long long> A;
    for (long long x : order) {
        bool ok = true;
        for (long long a : A)
            if (A.count(2 * a - x) || ((a + x) % 2 == 0 && A.count((a + x) / 2))) {
                ok = false;
                break;
            }
        if (ok) A.insert(x);
    }
    return {A.begin(), A.end()};
}

json stage_json(const std::vector<StageRecord>& st) {
    json a = json::array();
    for (const auto& r : st)
        a.push_back({{"id", r.id}, {"value", r.value}, {"threshold", r.threshold}, {"holds", r.holds}, {"note", r.note}});
    return a;
}

void pipeline_suite(Suite& s) {
    SearchBudget b;
    // subspace and planted-subspace witnesses over F_2^n
    for (int n : {3, 4, 5}) {
        GroupSpec G = make_group(std::vector<int>(n, 2));
        std::vector<int> row(n, 0);
        row[0] = 1;
        Subset V = AffineSubspace::from_equations(G, {row}, {0}).members();
        auto r = ii_part2(G, V, 2, 0.4, b);
        s.tally("ii_part2_subspace", r.certified && r.witness_value >= 1 + 0.4 / 4 - 1e-9,
                r.witness_value - 1 - 0.4 / 4, "n=" + std::to_string(n) + (r.certified ? "" : " " + r.failed_stage));
        s.rep.stages.push_back({{"stage", "ii_part2/subspace/n=" + std::to_string(n)}, {"records", stage_json(r.stages)}});
    }
    for (int n : {4, 5})
        for (uint64_t seed = 1; seed <= 3; ++seed) {
            GroupSpec G = make_group(std::vector<int>(n, 2));
            Subset P = planted_subspace(G, n - 1, 2, 3, seed);
            DensityFn Pd = indicator_density(G, P);
            const double eps = std::min(1.0, knorm(crosscorr(Pd, Pd), 2) - 1);
            const std::string w = "n=" + std::to_string(n) + " seed " + std::to_string(seed);
            if (eps <= 0) {
                s.skip("ii_part2_planted");
                continue;
            }
            try {
                auto r = ii_part2(G, P, 2, eps, b);
                s.tally("ii_part2_planted", r.certified && r.witness_value >= 1 + eps / 4 - 1e-9,
                        r.witness_value - 1 - eps / 4, w + (r.certified ? "" : " " + r.failed_stage));
            } catch (const ApcError& e) {
                s.tally("ii_part2_planted", false, 0, w + ": " + e.what());
            }
        }
    // robust sunflower: conclusion (i) exactly, divergence and sumset ratio recomputed
    Rng rng = s.rng("sunflower");
    for (int t = 0; t < 12; ++t) {
        GroupSpec G = make_group(t % 3 == 0 ? std::vector<int>{3, 3} : std::vector<int>{2, 2, 2, 2});
        Subset A = t == 0 ? AffineSubspace(G, {{1, 1}}, {0, 2}).members() : random_set(G, rng, 0.6);
        auto r = robust_sunflower(G, A, 0.5, 2);
        const std::string w = where(G, t);
        Subset span = r.span.members();
        const long long lhs = static_cast<long long>(r.Aprime.size()) * G.order();
        const long long rhs = static_cast<long long>(A.size()) * static_cast<long long>(span.size());
        s.tally("sunflower_density", lhs >= rhs, static_cast<double>(lhs - rhs), w);
        std::set<int> twice;
        for (int x : span)
            for (int y : span) twice.insert(G.add(x, y));
        std::vector<double> R(G.order(), 0);
        std::set<int> sums;
        for (int a : r.Aprime)
            for (int c : r.Aprime) {
                R[G.add(a, c)] += 1;
                sums.insert(G.add(a, c));
            }
        std::vector<double> pi, u;
        const double sq = static_cast<double>(r.Aprime.size()) * static_cast<double>(r.Aprime.size());
        for (int x : twice) {
            pi.push_back(R[x] / sq);
            u.push_back(1.0 / static_cast<double>(twice.size()));
        }
        double div = kdivergence(pi, u, r.k);
        s.close("sunflower_divergence", r.divergence, div, w);
        s.close("sunflower_sumset", r.sumset_ratio, static_cast<double>(sums.size()) / span.size(), w);
    }
    // svr_local on Z_101 and on an embedded nice configuration
    {
        GroupSpec G = make_group({101});
        BohrSet B{G, {1}, 2 * std::sin(std::numbers::pi * 10 / 101)};
        Subset A;
        for (int x = 40; x <= 60; ++x) A.push_back(x);
        auto r = svr_local(G, A, B, 2, 0.5, b);
        s.tally("svr_local", r.certified && r.final_proper && r.final_in_translate && r.final_double >= 1 + 0.5 / 8 - 1e-9,
                r.final_double - 1 - 0.5 / 8, "Z_101 interval" + (r.certified ? "" : " " + r.failed_stage));
        s.rep.stages.push_back({{"stage", "svr_local/Z_101"}, {"final", r.final_value.get_str()},
                                {"records", stage_json(r.stages)}});
        auto cfg = interval_configuration(211, greedy_free(43, 211, 116));
        auto em = embed_nice(cfg, 0.1);
        s.tally("embed_margin", em.margin_ok && em.safe, em.margin - 0.25, "Z_211 nice configuration");
        Subset img = em.image;
        std::sort(img.begin(), img.end());
        auto e = svr_local(em.G, img, em.B, em.k, 0.25, b);
        s.tally("svr_local", e.certified && e.final_proper && e.final_in_translate, e.final_double - 1 - 0.25 / 8,
                "Z_211 embedded" + (e.certified ? "" : " " + e.failed_stage));
        s.rep.stages.push_back({{"stage", "svr_local/Z_211"}, {"final", e.final_value.get_str()},
                                {"records", stage_json(e.stages)}});
    }
    // pass_to_spread terminates within ceil(d/eps)
    SpreadnessConfig sc;
    struct Run {
        std::string name;
        long long N;
        std::vector<long long> A;
        double nice_eps;
    };
    std::vector<Run> runs;
    {
        std::vector<long long> full;
        for (int i = 1; i <= 50; ++i) full.push_back(i);
        runs.push_back({"full[50]", 50, full, 1.0 / 512});
        for (int seed = 1; seed <= 3; ++seed) {
            Rng r = s.rng("dense/" + std::to_string(seed));
            std::vector<long long> A;
            for (int i = 1; i <= 200; ++i)
                if (r() % 3 == 0) A.push_back(i);
            runs.push_back({"dense[200]/" + std::to_string(seed), 200, A, 1.0 / 512});
        }
        Rng p = s.rng("planted");
        std::vector<long long> A;
        for (int i = 1; i <= 400; ++i) {
            if (i >= 100 && i <= 180) {
                if (p() % 4) A.push_back(i);
            } else if (p() % 10 == 0) {
                A.push_back(i);
            }
        }
        runs.push_back({"planted[400]", 400, A, 0.1});
        runs.push_back({"behrend[400]", 400, behrend_set(400).set, 0.1});
    }
    for (const Run& run : runs) {
        auto r = pass_to_spread(run.N, run.A, sc, s.seed("pipeline/" + run.name), b, 16, run.nice_eps);
        s.tally("spread_within_bound", r.within_bound && r.composition_hom,
                r.iteration_bound - r.iterations, run.name + ": " + r.stop_reason);
        json trace = json::array();
        json wall = json::array();
        for (const auto& t : r.trace) {
            trace.push_back({{"stage", t.stage}, {"inputs_hash", t.inputs_hash}, {"certificate", t.certificate},
                             {"achieved", t.achieved}, {"bound_shape", t.bound_shape}});
            wall.push_back(t.wallclock);
        }
        s.rep.stages.push_back({{"stage", "pass_to_spread/" + run.name}, {"iterations", r.iterations},
                                {"iteration_bound", r.iteration_bound}, {"stop_reason", r.stop_reason},
                                {"trace", trace}});
        s.rep.timing["pass_to_spread/" + run.name] = wall;
        if (run.name == "planted[400]")
            s.tally("planted_increment", r.iterations >= 1, r.iterations, run.name + ": " + r.stop_reason);
    }
}

const std::vector<std::pair<std::string, double>>& registry() {
    static const std::vector<std::pair<std::string, double>> ids{
        {"fourier", 30},  {"sifting", 300},  {"spectral", 120}, {"bohr", 180},    {"freiman", 120},
        {"smoothing", 60}, {"counting", 600}, {"appendix", 300}, {"pipeline", 1200}};
    return ids;
}

}  // namespace

bool ExperimentReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.holds(); });
}

std::vector<std::string> suite_ids() {
    std::vector<std::string> out;
    for (const auto& [id, t] : registry()) out.push_back(id);
    out.push_back("all");
    return out;
}

double suite_time_budget(const std::string& id) {
    double total = 0;
    for (const auto& [k, t] : registry()) {
        if (k == id) return t;
        total += t;
    }
    if (id == "all") return total;
    fail_usage("unknown suite '" + id + "'");
}

ExperimentReport run_suite(const std::string& id, const SuiteOptions& opt) {
    if (id == "all") {
        ExperimentReport all;
        all.command = "verify --suite all";
        all.seed = opt.seed;
        all.config = {{"suite", "all"}, {"seed", opt.seed}, {"scale", opt.scale}};
        json summary = json::array();
        const double t0 = now();
        for (const auto& [sid, budget] : registry()) {
            ExperimentReport r = run_suite(sid, opt);
            long long failing = 0;
            for (Check c : r.checks) {
                failing += !c.holds();
                c.id = sid + "/" + c.id;
                all.checks.push_back(c);
            }
            for (auto st : r.stages) {
                st["suite"] = sid;
                all.stages.push_back(st);
            }
            summary.push_back({{"suite", sid}, {"passed", r.passed()}, {"failing_checks", failing}});
            all.timing[sid] = r.wallclock;
        }
        all.config["summary"] = summary;
        all.wallclock = now() - t0;
        return all;
    }
    suite_time_budget(id);  // rejects unknown ids
    Suite s(id, opt);
    const double t0 = now();
    if (id == "fourier") fourier_suite(s);
    else if (id == "sifting") sifting_suite(s);
    else if (id == "spectral") spectral_suite(s);
    else if (id == "bohr") bohr_suite(s);
    else if (id == "freiman") freiman_suite(s);
    else if (id == "smoothing") smoothing_suite(s);
    else if (id == "counting") counting_suite(s);
    else if (id == "appendix") appendix_suite(s);
    else if (id == "pipeline") pipeline_suite(s);
    s.rep.wallclock = now() - t0;
    s.rep.timing["suite"] = s.rep.wallclock;
    s.rep.input_hashes.push_back(hex64(fnv1a(s.rep.config.dump())));
    return s.rep;
}

json report_json(const ExperimentReport& r, bool with_timing) {
    json checks = json::array();
    for (const Check& c : r.checks) {
        json j = {{"id", c.id},       {"instances", c.instances}, {"failures", c.failures}, {"skipped", c.skipped},
                  {"assertable", c.assertable}, {"holds", c.holds()}, {"detail", c.detail}};
        j["worst_margin"] = std::isfinite(c.worst) ? json(c.worst) : json(nullptr);
        checks.push_back(j);
    }
    json out = {{"command", r.command}, {"config", r.config},   {"seed", r.seed}, {"input_hashes", r.input_hashes},
                {"checks", checks},     {"stages", r.stages}, {"passed", r.passed()}};
    if (with_timing) {
        out["wallclock"] = r.wallclock;
        out["timing"] = r.timing;
    }
    return out;
}

std::string report_tsv(const ExperimentReport& r) {
    std::string out = "check\tinstances\tfailures\tskipped\tworst_margin\tholds\tdetail\n";
    for (const Check& c : r.checks) {
        char buf[64];
        if (std::isfinite(c.worst)) std::snprintf(buf, sizeof buf, "%.6g", c.worst);
        else std::snprintf(buf, sizeof buf, "-");
        out += c.id + "\t" + std::to_string(c.instances) + "\t" + std::to_string(c.failures) + "\t" +
               std::to_string(c.skipped) + "\t" + buf + "\t" + (c.holds() ? "yes" : "NO") + "\t" + c.detail + "\n";
    }
    return out;
}

std::string payload_hash(const ExperimentReport& r) { return hex64(fnv1a(report_json(r, false).dump())); }

void emit_report(const ExperimentReport& r, const std::string& path, const std::string& format) {
    std::string text;
    if (format == "json") text = report_json(r).dump(2) + "\n";
    else if (format == "tsv") text = report_tsv(r);
    else fail_usage("unknown format '" + format + "' (json|tsv)");
    if (path == "-" || path.empty()) std::cout << text;
    else write_file(path, text);
}

std::string store_report(const ExperimentReport& r, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::string path = (std::filesystem::path(dir) / (payload_hash(r) + ".json")).string();
    if (!std::filesystem::exists(path)) write_file(path, report_json(r).dump(2) + "\n");
    return path;
}

}  // namespace apc
