#include "apc/spread.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace apc {

namespace {

void need_vector_space(const GroupSpec& G, const std::string& stage) {
    if (!G.is_prime_vector_space()) fail_pre(stage, "group " + G.describe() + " is not a prime vector space");
}

int ipow(int p, int c) {
    int r = 1;
    for (int i = 0; i < c; ++i) r *= p;
    return r;
}

Mat identity(int n) {
    Mat m(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

AffineSubspace whole_space(const GroupSpec& G) { return AffineSubspace(G, identity(G.rank()), Elem(G.rank(), 0)); }

AffineSubspace shifted(const AffineSubspace& V, int y) {
    const GroupSpec& G = V.group();
    Elem s = V.shift(), c = G.coords(y);
    for (int i = 0; i < G.rank(); ++i) s[i] = (s[i] + c[i]) % G.p();
    return AffineSubspace(G, V.basis(), s);
}

Subset neg_set(const GroupSpec& G, const Subset& A) {
    Subset r;
    for (int a : A) r.push_back(G.neg(a));
    std::sort(r.begin(), r.end());
    return r;
}

Subset intersect(const Subset& A, const AffineSubspace& V) {
    Subset r;
    for (int a : A)
        if (V.contains(a)) r.push_back(a);
    return r;
}

struct PerpResult {
    double best = 0;  // coset weight times p^c
    int codim = 0;
    Mat M;
    std::vector<int> b;
    long long seen = 0;
    bool exhaustive = true;
};

// Maximises (sum of w over a coset) * p^codim over cosets of codim <= r.
PerpResult perp_core(const GroupSpec& G, const Subset& support, const std::vector<double>& w, int r, bool integral) {
    int n = G.rank(), p = G.p();
    r = std::clamp(r, 0, n);
    std::vector<Elem> pts;
    pts.reserve(support.size());
    for (int x : support) pts.push_back(G.coords(x));
    PerpResult res;
    res.best = std::accumulate(w.begin(), w.end(), 0.0);
    long long cap = search_budget();
    for (int c = 1; c <= r; ++c) {
        std::vector<Mat> mats;
        enumerate_rref(c, n, p, [&](const Mat& M) {
            if (res.seen >= cap) {
                res.exhaustive = false;
                return;
            }
            mats.push_back(M);
            ++res.seen;
        });
        int pc = ipow(p, c);
        std::vector<double> val(mats.size());
        std::vector<int> arg(mats.size());
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(mats.size()); ++i) {
            const Mat& M = mats[i];
            std::vector<double> h(pc, 0.0);
            for (size_t j = 0; j < pts.size(); ++j) {
                int idx = 0;
                for (int row = 0; row < c; ++row) {
                    long long s = 0;
                    for (int q = 0; q < n; ++q) s += static_cast<long long>(M[row][q]) * pts[j][q];
                    idx = idx * p + static_cast<int>(s % p);
                }
                h[idx] += w[j];
            }
            int bi = static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin());
            val[i] = h[bi] * pc;
            arg[i] = bi;
        }
        for (size_t i = 0; i < mats.size(); ++i) {
            double tol = integral ? 0.5 : 1e-12 * std::max(1.0, std::abs(res.best));
            if (val[i] > res.best + tol) {
                res.best = val[i];
                res.codim = c;
                res.M = mats[i];
                res.b.assign(c, 0);
                for (int row = c - 1, a = arg[i]; row >= 0; --row, a /= p) res.b[row] = a % p;
            }
        }
        if (!res.exhaustive) break;
    }
    return res;
}

AffineSubspace coset_of(const GroupSpec& G, const Mat& M, const std::vector<int>& b) {
    if (M.empty()) return whole_space(G);
    return AffineSubspace::from_equations(G, M, b);
}

// Coset of the linear part of V maximising the average of F; lex-first rhs on ties.
std::pair<AffineSubspace, double> best_coset(const AffineSubspace& V, const RealFn& F) {
    const GroupSpec& G = V.group();
    int p = G.p(), c = V.codim();
    if (c == 0) return {whole_space(G), mean(F)};
    std::vector<double> h(ipow(p, c), 0.0);
    for (int x = 0; x < G.order(); ++x) {
        Elem e = G.coords(x);
        int idx = 0;
        for (const auto& row : V.dual()) {
            long long s = 0;
            for (int q = 0; q < G.rank(); ++q) s += static_cast<long long>(row[q]) * e[q];
            idx = idx * p + static_cast<int>(s % p);
        }
        h[idx] += F.v[x];
    }
    int bi = 0;
    for (int i = 1; i < static_cast<int>(h.size()); ++i)
        if (h[i] > h[bi] + 1e-12 * std::max(1.0, std::abs(h[bi]))) bi = i;
    std::vector<int> b(c);
    for (int row = c - 1, a = bi; row >= 0; --row, a /= p) b[row] = a % p;
    double value = h[bi] * ipow(p, c) / G.order();
    return {AffineSubspace::from_equations(G, V.dual(), b), value};
}

std::vector<int> pivots(const Mat& basis) {
    std::vector<int> piv;
    for (const auto& row : basis)
        piv.push_back(static_cast<int>(std::find_if(row.begin(), row.end(), [](int v) { return v != 0; }) - row.begin()));
    return piv;
}

StageRecord stage(const std::string& id, double value, double threshold, bool ge = true, const std::string& note = "") {
    StageRecord s{id, value, threshold, ge ? value >= threshold - kTol : value <= threshold + kTol, note};
    return s;
}

bool push_stage(TheoremIIReport& rep, StageRecord s) {
    bool ok = s.holds;
    if (!ok && rep.failed_stage.empty()) rep.failed_stage = s.id;
    rep.stages.push_back(std::move(s));
    return ok;
}

}  // namespace

double set_density(const GroupSpec& G, const Subset& A) { return static_cast<double>(A.size()) / G.order(); }

double density_deficit(const GroupSpec& G, const Subset& A) {
    if (A.empty()) fail_pre("density", "empty set");
    return std::max(1.0, lg(static_cast<double>(G.order()) / A.size()));
}

Rational subspace_density_ratio(const AffineSubspace& V, const Subset& A) {
    if (A.empty()) fail_pre("perp_norm", "empty set");
    long long cnt = 0;
    for (int a : A) cnt += V.contains(a);
    mpz_class num = static_cast<long>(cnt);
    for (int i = 0; i < V.codim(); ++i) num *= V.group().p();
    return frac(num, static_cast<long>(A.size()));
}

SpreadReport perp_norm(const GroupSpec& G, const Subset& A, int r) {
    need_vector_space(G, "perp_norm");
    if (A.empty()) fail_pre("perp_norm", "empty set");
    if (r < 0) fail_pre("perp_norm", "r < 0");
    PerpResult pr = perp_core(G, A, std::vector<double>(A.size(), 1.0), r, true);
    SpreadReport rep;
    rep.r_or_k = r;
    rep.subspace = coset_of(G, pr.M, pr.b);
    Rational g = subspace_density_ratio(*rep.subspace, A);
    rep.gamma = g.get_d();
    rep.gamma_exact = g.get_str();
    rep.exhaustive = pr.exhaustive;
    rep.evaluated = pr.seen;
    if (!pr.exhaustive) rep.note = "search budget reached; best value found so far";
    return rep;
}

SpreadReport perp_norm_fn(const RealFn& f, int r) {
    const GroupSpec& G = f.G;
    need_vector_space(G, "perp_norm");
    Subset sup;
    std::vector<double> w;
    for (int x = 0; x < G.order(); ++x)
        if (f.v[x] != 0) {
            sup.push_back(x);
            w.push_back(f.v[x]);
        }
    PerpResult pr = perp_core(G, sup, w, r, false);
    SpreadReport rep;
    rep.r_or_k = r;
    rep.subspace = coset_of(G, pr.M, pr.b);
    rep.gamma = pr.best / G.order();
    rep.exhaustive = pr.exhaustive;
    rep.evaluated = pr.seen;
    return rep;
}

Rational star_value(const GroupSpec& G, const Subset& A, const Subset& B, const Subset& C) {
    if (A.empty() || B.empty() || C.empty()) fail_pre("star_norm", "empty set");
    std::vector<char> inA(G.order(), 0);
    for (int a : A) inA[a] = 1;
    long long cnt = 0;
    for (int b : B)
        for (int c : C) cnt += inA[G.add(b, c)];
    mpz_class den = static_cast<long>(A.size());
    den *= static_cast<long>(B.size());
    den *= static_cast<long>(C.size());
    return frac(mpz_class(static_cast<long>(cnt)) * G.order(), den);
}

SpreadReport star_norm(const GroupSpec& G, const Subset& A, double k, StarMode mode,
                       const std::vector<std::pair<Subset, Subset>>& witnesses) {
    if (A.empty()) fail_pre("star_norm", "empty set");
    if (k < 0) fail_pre("star_norm", "k < 0");
    int N = G.order();
    long long m0 = std::max(1LL, static_cast<long long>(std::ceil(std::pow(2.0, -k) * N - 1e-9)));
    SpreadReport rep;
    rep.r_or_k = static_cast<int>(std::ceil(k));
    if (mode == StarMode::Witness) {
        rep.exhaustive = false;
        rep.note = "witness mode: certified lower bound; exhaustive search is limited to |G| <= 16";
        Rational best = -1;
        for (const auto& [B, C] : witnesses) {
            if (static_cast<long long>(B.size()) < m0 || static_cast<long long>(C.size()) < m0)
                fail_pre("star_norm", "witness set smaller than 2^-k |G|");
            Rational v = star_value(G, A, B, C);
            ++rep.evaluated;
            if (v > best) {
                best = v;
                rep.B = B;
                rep.C = C;
            }
        }
        if (best < 0) fail_pre("star_norm", "no witness pairs supplied");
        rep.gamma = best.get_d();
        rep.gamma_exact = best.get_str();
        return rep;
    }
    if (N > kStarExhaustiveCap)
        fail_budget("star_norm", "exhaustive mode is limited to |G| <= 16 (got " + std::to_string(N) + ")");
    rep.note = "exhaustive over all pairs; limited to |G| <= 16";
    std::vector<char> inA(N, 0);
    for (int a : A) inA[a] = 1;
    long long masks = 1LL << N;
    // best C for a fixed B: the m0 largest values of B⋆A
    std::vector<long long> top(masks, -1);
#pragma omp parallel for schedule(static)
    for (long long mask = 1; mask < masks; ++mask) {
        if (__builtin_popcountll(mask) < m0) continue;
        std::vector<long long> cnt(N, 0);
        for (int b = 0; b < N; ++b)
            if (mask >> b & 1)
                for (int z = 0; z < N; ++z) cnt[z] += inA[G.add(b, z)];
        std::sort(cnt.begin(), cnt.end(), std::greater<>());
        top[mask] = std::accumulate(cnt.begin(), cnt.begin() + m0, 0LL);
    }
    long long bestMask = -1;
    for (long long mask = 1; mask < masks; ++mask) {
        if (top[mask] < 0) continue;
        ++rep.evaluated;
        if (bestMask < 0 ||
            top[mask] * __builtin_popcountll(bestMask) > top[bestMask] * __builtin_popcountll(mask))
            bestMask = mask;
    }
    for (int b = 0; b < N; ++b)
        if (bestMask >> b & 1) rep.B.push_back(b);
    std::vector<std::pair<long long, int>> cz;
    for (int z = 0; z < N; ++z) {
        long long c = 0;
        for (int b : rep.B) c += inA[G.add(b, z)];
        cz.push_back({-c, z});
    }
    std::sort(cz.begin(), cz.end());
    for (long long i = 0; i < m0; ++i) rep.C.push_back(cz[i].second);
    std::sort(rep.C.begin(), rep.C.end());
    Rational g = star_value(G, A, rep.B, rep.C);
    rep.gamma = g.get_d();
    rep.gamma_exact = g.get_str();
    return rep;
}

GroupSpec quotient_group(const AffineSubspace& V) {
    if (V.dim() == 0) fail_pre("quotient", "zero-dimensional container");
    return GroupSpec(std::vector<int>(V.dim(), V.group().p()));
}

Subset to_quotient(const AffineSubspace& V, const Subset& S) {
    GroupSpec Q = quotient_group(V);
    const GroupSpec& G = V.group();
    auto piv = pivots(V.basis());
    Subset out;
    for (int s : S) {
        if (!V.contains(s)) fail_pre("quotient", "point outside the container");
        Elem x = G.coords(s), c(V.dim());
        for (int i = 0; i < V.dim(); ++i) c[i] = ((x[piv[i]] - V.shift()[piv[i]]) % G.p() + G.p()) % G.p();
        out.push_back(Q.index(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Subset from_quotient(const AffineSubspace& V, const Subset& Qs) {
    GroupSpec Q = quotient_group(V);
    const GroupSpec& G = V.group();
    Subset out;
    for (int q : Qs) {
        Elem c = Q.coords(q), x = V.shift();
        for (int i = 0; i < V.dim(); ++i)
            for (int j = 0; j < G.rank(); ++j) x[j] = (x[j] + c[i] * V.basis()[i][j]) % G.p();
        out.push_back(G.index(x));
    }
    std::sort(out.begin(), out.end());
    return out;
}

AffineSubspace lift_subspace(const AffineSubspace& V, const AffineSubspace& inner) {
    const GroupSpec& G = V.group();
    int p = G.p();
    Mat dirs;
    for (const auto& row : inner.basis()) {
        std::vector<int> x(G.rank(), 0);
        for (int i = 0; i < V.dim(); ++i)
            for (int j = 0; j < G.rank(); ++j) x[j] = (x[j] + row[i] * V.basis()[i][j]) % p;
        dirs.push_back(x);
    }
    Elem point = G.coords(from_quotient(V, {inner.group().index(inner.shift())})[0]);
    return AffineSubspace(G, dirs, point);
}

AffineSubspace annihilator(const GroupSpec& G, const Subset& chars) {
    need_vector_space(G, "annihilator");
    Mat W;
    for (int a : chars)
        if (a != 0) W.push_back(G.coords(a));
    Elem zero(G.rank(), 0);
    if (W.empty()) return whole_space(G);
    return AffineSubspace(G, kernel_basis(W, G.rank(), G.p()), zero);
}

IncrementTrace greedy_spread(const GroupSpec& G, const Subset& A, double eps, int r) {
    need_vector_space(G, "greedy_spread");
    if (A.empty()) fail_pre("greedy_spread", "empty set");
    if (!(eps > 0 && eps <= 1)) fail_pre("greedy_spread", "eps outside (0,1]");
    if (r < 0) fail_pre("greedy_spread", "r < 0");
    IncrementTrace T;
    T.initial_density = set_density(G, A);
    T.d = lg(static_cast<double>(G.order()) / A.size());
    T.iteration_bound = static_cast<int>(std::ceil(T.d / eps - 1e-12));
    T.codim_bound = r * T.iteration_bound;
    AffineSubspace cont = whole_space(G);
    Subset cur = A;
    Rational thr = 1 + exact(eps);
    while (true) {
        if (cont.dim() == 0) {
            T.final_perp = 1;
            T.spread_certified = true;
            break;
        }
        GroupSpec Q = quotient_group(cont);
        Subset qs = to_quotient(cont, cur);
        SpreadReport pr = perp_norm(Q, qs, std::min(r, cont.dim()));
        if (!pr.exhaustive) T.exhaustive = false;
        Rational g(pr.gamma_exact);
        if (g <= thr) {
            T.final_perp = pr.gamma;
            T.spread_certified = pr.exhaustive;
            break;
        }
        AffineSubspace next = lift_subspace(cont, *pr.subspace);
        IncrementStep st{next, static_cast<double>(cur.size()) / cont.size(), 0, pr.gamma_exact};
        cur = intersect(cur, next);
        cont = next;
        st.density_after = static_cast<double>(cur.size()) / cont.size();
        T.steps.push_back(st);
    }
    T.iterations = static_cast<int>(T.steps.size());
    T.final_set = cur;
    T.final_container = cont;
    T.final_density = static_cast<double>(cur.size()) / cont.size();
    if (T.iterations > T.iteration_bound) T.note = "iteration count exceeds ceil(d/eps)";
    if (cont.codim() > T.codim_bound) T.note += (T.note.empty() ? "" : "; ") + std::string("codim exceeds r ceil(d/eps)");
    if (!T.exhaustive) T.note += (T.note.empty() ? "" : "; ") + std::string("perp search hit the budget");
    return T;
}

ChangReport chang_check(const GroupSpec& G, const Subset& A, double eps) {
    need_vector_space(G, "chang_check");
    if (!(eps > 0)) fail_pre("chang_check", "eps must be positive");
    ChangReport rep;
    rep.d = density_deficit(G, A);
    rep.bound = 4 * rep.d / (eps * eps);
    Spectrum S = fourier(indicator_density(G, A));
    Mat rows;
    int rank = 0;
    for (int a = 0; a < G.order(); ++a) {
        if (std::abs(S.c[a]) < eps - 1e-12) continue;
        rep.spec.push_back(a);
        rows.push_back(G.coords(a));
        int nr = rank_mod_p(rows, G.p());
        if (nr > rank) {
            rank = nr;
            rep.independent.push_back(a);
        } else {
            rows.pop_back();
        }
    }
    rep.holds = rep.independent.size() <= rep.bound + 1e-12;
    return rep;
}

CrootSisaskReport croot_sisask(const GroupSpec& G, const Subset& A, const RealFn& f, int k, double eps, int trials,
                               uint64_t seed, const Subset& Aprime) {
    if (A.empty()) fail_pre("croot_sisask", "empty set");
    if (k < 2 || k % 2) fail_pre("croot_sisask", "k must be an even integer >= 2");
    if (!(eps > 0 && eps <= 1)) fail_pre("croot_sisask", "eps outside (0,1]");
    if (trials < 1) fail_pre("croot_sisask", "trials < 1");
    for (double v : f.v)
        if (v < 0) fail_pre("croot_sisask", "f must be non-negative");
    if (knorm(f, k) > 1 + 1e-12) fail_pre("croot_sisask", "||f||_k > 1");
    int N = G.order();
    Subset Ap = Aprime;
    if (Ap.empty()) {
        Ap.resize(N);
        std::iota(Ap.begin(), Ap.end(), 0);
    }
    CrootSisaskReport rep;
    rep.k = k;
    rep.eps = eps;
    rep.ell = static_cast<int>(std::ceil(16.0 * k / (eps * eps)));
    rep.trials = trials;
    {
        std::vector<char> sum(N, 0);
        for (int a : A)
            for (int p : Ap) sum[G.add(a, p)] = 1;
        double sz = std::count(sum.begin(), sum.end(), 1);
        rep.reference_exponent = k * std::max(1.0, lg(sz / A.size())) / (eps * eps);
    }
    RealFn g = convolve(indicator_density(G, A), f);
    double good = 2 * std::sqrt(static_cast<double>(k) / rep.ell);
    Rng rng(stage_seed(seed, "croot_sisask"));
    std::vector<double> s(N);
    for (int t = 0; t < trials; ++t) {
        // multinomial counts of ell uniform draws from A, by sequential binomials
        std::vector<long long> cnt(A.size(), 0);
        long long left = rep.ell;
        for (size_t i = 0; i < A.size() && left > 0; ++i) {
            if (i + 1 == A.size()) {
                cnt[i] = left;
                break;
            }
            std::binomial_distribution<long long> bin(left, 1.0 / static_cast<double>(A.size() - i));
            cnt[i] = bin(rng);
            left -= cnt[i];
        }
        int p0 = Ap[std::uniform_int_distribution<size_t>(0, Ap.size() - 1)(rng)];
        std::fill(s.begin(), s.end(), 0.0);
        for (size_t i = 0; i < A.size(); ++i) {
            if (!cnt[i]) continue;
            double wgt = static_cast<double>(cnt[i]) / rep.ell;
            int y = G.add(A[i], p0);
            for (int x = 0; x < N; ++x) s[x] += wgt * f.v[G.sub(x, y)];
        }
        Subset St;
        for (int p : Ap) {
            double acc = 0;
            for (int x = 0; x < N; ++x) acc += std::pow(std::abs(s[x] - g.v[G.sub(x, p)]), k);
            if (std::pow(acc / N, 1.0 / k) <= good + 1e-12) St.push_back(p);
        }
        if (St.size() > rep.S.size()) rep.S = St;
    }
    if (rep.S.empty()) {
        rep.note = "no nonempty S found within the trial budget";
        return rep;
    }
    std::vector<double> stab(N, -1);
    for (int p : rep.S)
        for (int q : rep.S) {
            int v = G.sub(p, q);
            if (stab[v] < 0) {
                double acc = 0;
                for (int x = 0; x < N; ++x) acc += std::pow(std::abs(g.v[G.sub(x, v)] - g.v[x]), k);
                stab[v] = std::pow(acc / N, 1.0 / k);
            }
            rep.max_pair_deviation = std::max(rep.max_pair_deviation, stab[v]);
        }
    rep.certified = rep.max_pair_deviation <= eps + 1e-12;
    rep.size_fraction = static_cast<double>(rep.S.size()) / Ap.size();
    return rep;
}

SandersReport sanders_invariance(const GroupSpec& G, const Subset& A, const Subset& B, const RealFn& f, double eps,
                                 uint64_t seed, int trials) {
    need_vector_space(G, "sanders_invariance");
    if (A.empty() || B.empty()) fail_pre("sanders_invariance", "empty set");
    if (!(eps > 0 && eps <= 1)) fail_pre("sanders_invariance", "eps outside (0,1]");
    for (double v : f.v)
        if (v < -1e-12 || v > 1 + 1e-12) fail_pre("sanders_invariance", "f must map into [0,1]");
    SandersReport rep;
    int N = G.order();
    // any d with |A| >= 2^-d |G| is admissible; raising it to lg(1/eps) meets eps >= 2^-d
    double d = std::max({1.0, lg(static_cast<double>(N) / A.size()), lg(1 / eps)});
    double kB = lg(static_cast<double>(N) / B.size());
    rep.norm_k = std::max(2, static_cast<int>(std::ceil(kB - 1e-12)));
    if (rep.norm_k % 2) ++rep.norm_k;
    rep.t = std::max(1, static_cast<int>(std::ceil((d + lg(8 / eps)) / 2)));
    rep.eta = eps / (16.0 * rep.t);
    rep.reference_codim = std::max(1.0, kB) * d * d * d / (eps * eps);
    rep.cs = croot_sisask(G, neg_set(G, A), f, rep.norm_k, rep.eta, trials, stage_seed(seed, "sanders"));
    if (rep.cs.S.empty()) {
        rep.V = AffineSubspace(G, {}, Elem(G.rank(), 0));
        rep.note = "croot_sisask found no shifts; falling back to V = {0}";
    } else {
        Spectrum S = fourier(indicator_density(G, rep.cs.S));
        for (int a = 0; a < N; ++a)
            if (std::abs(S.c[a]) >= 0.5 - 1e-12) rep.spec.push_back(a);
        rep.V = annihilator(G, rep.spec);
    }
    rep.codim = rep.V.codim();
    RealFn Vd = indicator_density(G, rep.V.members());
    RealFn AB = convolve(indicator_density(G, A), indicator_density(G, B));
    RealFn VAB = convolve(Vd, AB);
    rep.deviation = std::abs(inner(VAB, f) - inner(AB, f));
    bool ok = rep.deviation <= eps + kTol;
    if (N <= 256) {
        rep.pointwise_checked = true;
        RealFn u = crosscorr(indicator_density(G, A), crosscorr(indicator_density(G, B), f));
        double worst = 0;
        for (int v : rep.V.members())
            for (int x = 0; x < N; ++x) worst = std::max(worst, std::abs(u.v[G.add(x, v)] - u.v[x]));
        rep.pointwise_deviation = worst;
        ok = ok && worst <= eps + kTol;
    }
    rep.certified = ok && rep.cs.certified;
    return rep;
}

namespace {

// <V+t, F> maximised over translates t, then V'' = b - V' for the best b in `shifts`.
struct Extraction {
    AffineSubspace Vp, Vpp;
    double vp = 0, vpp = 0;
};

Extraction extract(const GroupSpec& G, const AffineSubspace& V, const RealFn& F, const Subset& A,
                   const Subset& shifts, bool reflect_coset) {
    Extraction e;
    auto [Vp, vp] = best_coset(V, F);
    e.Vp = Vp;
    e.vp = vp;
    Rational best = -1;
    for (int b : shifts) {
        AffineSubspace cand = Vp;
        if (reflect_coset) {
            // b - (V + t) = V + (b - t)
            cand = AffineSubspace(G, Vp.basis(), G.coords(G.sub(b, G.index(Vp.shift()))));
        } else {
            cand = shifted(Vp, b);
        }
        Rational v = subspace_density_ratio(cand, A);
        if (v > best) {
            best = v;
            e.Vpp = cand;
        }
    }
    e.vpp = best.get_d();
    return e;
}

RealFn indicator_fn(const GroupSpec& G, const std::function<bool(int)>& pred) {
    RealFn f(G);
    for (int x = 0; x < G.order(); ++x) f.v[x] = pred(x) ? 1.0 : 0.0;
    return f;
}

}  // namespace

TheoremIIReport ii_part2(const GroupSpec& G, const Subset& A, double k, double eps, const SearchBudget& budget) {
    need_vector_space(G, "ii_part2");
    if (A.empty()) fail_pre("ii_part2", "empty set");
    if (!(eps > 0)) fail_pre("ii_part2", "eps must be positive");
    if (k < 1) fail_pre("ii_part2", "k < 1");
    TheoremIIReport rep;
    QFn AA = self_crosscorr_q(G, A);
    RealFn AAd = AA.to_real();
    double hyp = knorm(AAd, k);
    if (hyp < 1 + eps - 1e-12)
        fail_pre("ii_part2/hypothesis", "||A⋆A||_k = " + std::to_string(hyp) + " < 1 + eps");
    push_stage(rep, stage("hypothesis", hyp, 1 + eps));
    rep.k_used = eps <= 0.5 ? std::max(k, lg(1 / eps) / eps) : k;

    RobustWitness rw = sift_robust_witness(G, A, rep.k_used, eps, budget);
    double eps_bar = rw.eps_bar;
    if (!push_stage(rep, stage("robust_witness", rw.witness_mass, eps_bar / 16, false, rw.note)) ||
        !rw.corollary_certified) {
        if (rep.failed_stage.empty()) rep.failed_stage = "robust_witness";
        return rep;
    }
    rep.Aprime = rw.outcome.sets[0];

    Rational thr = 1 + exact(eps) / 2;
    RealFn f = indicator_fn(G, [&](int x) { return AA.v[x] >= thr; });
    rep.sanders = sanders_invariance(G, rep.Aprime, neg_set(G, rep.Aprime), f, eps_bar / 16, budget.seed);
    const AffineSubspace& V = rep.sanders.V;
    RealFn ApAp = crosscorr(indicator_density(G, rep.Aprime), indicator_density(G, rep.Aprime));
    RealFn VApAp = convolve(indicator_density(G, V.members()), ApAp);
    if (!push_stage(rep, stage("sanders", inner(VApAp, f), 1 - eps_bar / 8, true, rep.sanders.note))) return rep;
    double chain = inner(VApAp, AAd);
    if (!push_stage(rep, stage("chain", chain, 1 + eps / 4))) return rep;

    Extraction ex = extract(G, V, AAd, A, A, false);
    if (!push_stage(rep, stage("translate", ex.vp, 1 + eps / 4))) return rep;
    rep.witness = ex.Vpp;
    rep.witness_value = ex.vpp;
    rep.codim = V.codim();
    if (!push_stage(rep, stage("witness", ex.vpp, 1 + eps / 4))) return rep;

    // Fourier form over W = V^perp
    Spectrum SA = fourier(indicator_density(G, A));
    Spectrum SAp = fourier(indicator_density(G, rep.Aprime));
    double chain_fourier = 0;
    for (int a = 0; a < G.order(); ++a) {
        bool inW = true;
        Elem al = G.coords(a);
        for (const auto& row : V.basis()) {
            long long s = 0;
            for (int j = 0; j < G.rank(); ++j) s += static_cast<long long>(al[j]) * row[j];
            if (s % G.p()) {
                inW = false;
                break;
            }
        }
        if (!inW) continue;
        double a2 = std::norm(SA.c[a]);
        chain_fourier += std::norm(SAp.c[a]) * a2;
        if (a) rep.fourier_sum += a2;
    }
    RealFn PA = add_const(convolve(indicator_density(G, V.members()), indicator_density(G, A)), -1.0);
    rep.projection_l2 = std::pow(knorm(PA, 2), 2);
    push_stage(rep, stage("fourier", rep.fourier_sum, eps / 4, true,
                          std::abs(chain_fourier - chain) > 1e-9 ? "Fourier chain identity mismatch" : ""));
    if (std::abs(rep.projection_l2 - rep.fourier_sum) > 1e-9 && rep.failed_stage.empty())
        rep.failed_stage = "projection";
    rep.certified = rep.failed_stage.empty();
    return rep;
}

TheoremIIReport ii_part1(const GroupSpec& G, const Subset& A, double k, double eps, const Subset& B,
                         const Subset& C, const SearchBudget& budget) {
    need_vector_space(G, "ii_part1");
    if (A.empty() || B.empty() || C.empty()) fail_pre("ii_part1", "empty set");
    if (!(eps > 0)) fail_pre("ii_part1", "eps must be positive");
    double floor_size = std::pow(2.0, -k) * G.order();
    if (B.size() < floor_size - 1e-9 || C.size() < floor_size - 1e-9)
        fail_pre("ii_part1", "witness sets smaller than 2^-k |G|");
    TheoremIIReport rep;
    Rational hyp = star_value(G, A, B, C);
    if (hyp < 1 + exact(eps))
        fail_pre("ii_part1/hypothesis", "<A, B*C> = " + hyp.get_str() + " < 1 + eps");
    push_stage(rep, stage("hypothesis", hyp.get_d(), 1 + eps));
    double eps_bar = std::min(1.0, eps);
    double p = 4 * std::log2(std::exp(1.0)) * k / eps_bar + lg(2 / eps_bar) / eps_bar;
    rep.k_used = p;

    RealFn Ad = indicator_density(G, A);
    Subset Bs;
    RealFn AB;
    double best = 0;
    for (const Subset* X : {&B, &C}) {
        RealFn cand = crosscorr(Ad, indicator_density(G, *X));
        double nv = knorm(cand, p);
        if (nv > best) {
            best = nv;
            Bs = *X;
            AB = cand;
        }
        if (nv >= 1 + eps / 2 - kTol) break;
    }
    if (!push_stage(rep, stage("p_norm", best, 1 + eps / 2))) return rep;

    double tau = (eps / 8) / (1 + eps / 4);
    RealFn fbad = indicator_fn(G, [&](int x) { return AB.v[x] < 1 + eps / 4; });
    RealFn fgood = add_const(fbad, -1.0);
    for (double& v : fgood.v) v = -v;
    SiftOutcome so = sift_pair(G, A, Bs, fbad, static_cast<int>(std::ceil(p)), budget);
    if (so.sets.size() < 2 || so.sets[0].empty() || so.sets[1].empty()) {
        push_stage(rep, stage("sift", 1, tau / 2, false, "sifting produced no sets"));
        return rep;
    }
    rep.Aprime = so.sets[0];
    rep.Bprime = so.sets[1];
    RealFn ApBp = crosscorr(indicator_density(G, rep.Aprime), indicator_density(G, rep.Bprime));
    if (!push_stage(rep, stage("sift", inner(ApBp, fbad), tau / 2, false))) return rep;

    rep.sanders = sanders_invariance(G, neg_set(G, rep.Aprime), rep.Bprime, fgood, tau / 2, budget.seed);
    const AffineSubspace& V = rep.sanders.V;
    RealFn VApBp = convolve(indicator_density(G, V.members()), ApBp);
    if (!push_stage(rep, stage("sanders", inner(VApBp, fgood), 1 - tau, true, rep.sanders.note))) return rep;
    if (!push_stage(rep, stage("chain", inner(VApBp, AB), 1 + eps / 8))) return rep;

    Extraction ex = extract(G, V, AB, A, Bs, true);
    if (!push_stage(rep, stage("translate", ex.vp, 1 + eps / 8))) return rep;
    rep.witness = ex.Vpp;
    rep.witness_value = ex.vpp;
    rep.codim = V.codim();
    push_stage(rep, stage("witness", ex.vpp, 1 + eps / 8));
    rep.certified = rep.failed_stage.empty();
    return rep;
}

NearUniformityReport near_uniformity(const GroupSpec& G, const Subset& A, const Subset& B, int r, int k, double eps,
                                     const SearchBudget& budget, int eps_exponent, double eta) {
    need_vector_space(G, "near_uniformity");
    if (A.empty() || B.empty()) fail_pre("near_uniformity", "empty set");
    if (k < 2 || k % 2) fail_pre("near_uniformity", "k must be an even integer >= 2");
    if (!(eps > 0)) fail_pre("near_uniformity", "eps must be positive");
    NearUniformityReport rep;
    rep.eps_exponent = eps_exponent;
    rep.eta = eta < 0 ? 2 * eps : eta;
    RealFn AB = convolve(indicator_density(G, A), indicator_density(G, B));
    rep.deviation = knorm(add_const(AB, -1.0), k);
    SpreadReport pa = perp_norm(G, A, r), pb = perp_norm(G, B, r);
    rep.perp_A = pa.gamma;
    rep.perp_B = pb.gamma;
    rep.perp_exhaustive = pa.exhaustive && pb.exhaustive;
    double d = std::max(density_deficit(G, A), density_deficit(G, B));
    rep.r_required = std::pow(d * k, 4) / std::pow(eps, eps_exponent);
    rep.note = "exponent c = " + std::to_string(eps_exponent) + " is a configuration choice";
    if (rep.deviation < rep.eta) return rep;
    rep.witness_needed = true;
    // contrapositive of the two-sided bound: dev > 2e' forces ||X⋆X||_{ceil(k/e')} > 1 + e'
    double ep = std::min(1.0, rep.deviation / 2) * (1 - 1e-6);
    rep.k_prime = static_cast<int>(std::ceil(k / ep));
    double nA = knorm(crosscorr(indicator_density(G, A), indicator_density(G, A)), rep.k_prime);
    double nB = knorm(crosscorr(indicator_density(G, B), indicator_density(G, B)), rep.k_prime);
    rep.witness_set = nA >= nB ? 'A' : 'B';
    rep.self_norm = std::max(nA, nB);
    if (rep.self_norm < 1 + ep - kTol) {
        rep.consistent = false;
        rep.note += "; decoupling stage failed: neither set is self-irregular at k'";
        return rep;
    }
    const Subset& X = rep.witness_set == 'A' ? A : B;
    try {
        rep.witness = ii_part2(G, X, rep.k_prime, ep, budget);
        if (rep.witness->certified &&
            subspace_density_ratio(rep.witness->witness, X).get_d() < 1 + ep / 4 - kTol)
            rep.consistent = false;
    } catch (const ApcError& e) {
        rep.note += std::string("; ii_part2: ") + e.what();
    }
    return rep;
}

SunflowerReport robust_sunflower(const GroupSpec& G, const Subset& A, double eps, double k, double factor,
                                 int eps_exponent) {
    need_vector_space(G, "robust_sunflower");
    if (A.empty()) fail_pre("robust_sunflower", "empty set");
    if (!(eps > 0 && eps < 1)) fail_pre("robust_sunflower", "eps outside (0,1)");
    if (k < 1) fail_pre("robust_sunflower", "k < 1");
    if (!(factor > 0)) fail_pre("robust_sunflower", "factor must be positive");
    SunflowerReport rep;
    rep.k = k;
    double d = density_deficit(G, A);
    double rf = std::ceil(factor * std::pow(k * d, 4) / std::pow(eps, eps_exponent));
    rep.r_formula = rf > 1e9 ? 1000000000 : static_cast<int>(rf);
    rep.r_used = std::clamp(rep.r_formula, 1, G.rank());
    rep.r_capped = rep.r_used != rep.r_formula;
    rep.reference_codim = std::pow(d, 5) * std::pow(k, 4);
    rep.trace = greedy_spread(G, A, eps, rep.r_used);
    rep.Aprime = rep.trace.final_set;
    rep.span = span_affine(G, rep.Aprime);
    mpz_class lhs = static_cast<long>(rep.Aprime.size()), rhs = static_cast<long>(A.size());
    lhs *= G.order();
    rhs *= static_cast<long>(rep.span.size());
    rep.density_no_loss = lhs >= rhs;
    if (rep.span.dim() == 0) {
        rep.divergence = 0;
        rep.divergence_pow_exact = "0";
        rep.sumset_ratio = 1;
        rep.triple_sum_forced = true;
        rep.triple_sum_is_span = true;
        return rep;
    }
    GroupSpec Q = quotient_group(rep.span);
    Subset Bq = to_quotient(rep.span, rep.Aprime);
    auto R = rep_counts(Q, Bq, Bq, RepKind::Sum).counts;
    double n2 = static_cast<double>(Bq.size()) * Bq.size();
    std::vector<double> pi(Q.order()), uni(Q.order(), 1.0 / Q.order());
    long long covered = 0;
    for (int x = 0; x < Q.order(); ++x) {
        pi[x] = R[x] / n2;
        covered += R[x] > 0;
    }
    rep.divergence = kdivergence(pi, uni, k);
    if (std::floor(k) == k) {
        std::vector<Rational> pq(Q.order()), uq(Q.order(), frac(1, Q.order()));
        for (int x = 0; x < Q.order(); ++x) pq[x] = frac(static_cast<long>(R[x]), mpz_class(static_cast<long>(Bq.size())) * static_cast<long>(Bq.size()));
        rep.divergence_pow_exact = kdivergence_pow(pq, uq, static_cast<int>(k)).get_str();
    }
    rep.sumset_ratio = static_cast<double>(covered) / Q.order();
    // B+B misses at most div^k of V; below |B|/|V| every v - B meets B+B
    rep.triple_sum_forced = std::pow(rep.divergence, k) < static_cast<double>(Bq.size()) / Q.order();
    std::vector<char> two(Q.order(), 0), three(Q.order(), 0);
    for (int x = 0; x < Q.order(); ++x) two[x] = R[x] > 0;
    for (int x = 0; x < Q.order(); ++x)
        if (two[x])
            for (int b : Bq) three[Q.add(x, b)] = 1;
    rep.triple_sum_is_span = std::all_of(three.begin(), three.end(), [](char c) { return c; });
    if (rep.triple_sum_forced && !rep.triple_sum_is_span) rep.note = "triple sum failed to fill the span";
    return rep;
}

RothMeshulamReport roth_meshulam_stats(const GroupSpec& G, const Subset& A, const Subset& B, const Subset& C) {
    if (A.empty() || B.empty() || C.empty()) fail_pre("roth_meshulam", "empty set");
    RothMeshulamReport rep;
    Spectrum S = fourier(indicator_density(G, A));
    for (int a = 1; a < G.order(); ++a) rep.max_coeff = std::max(rep.max_coeff, std::abs(S.c[a]));
    if (G.is_prime_vector_space()) {
        rep.perp1 = perp_norm(G, A, 1).gamma;
        rep.bound1_holds = rep.max_coeff <= 2 * (*rep.perp1 - 1) + kTol;
    }
    rep.star = star_value(G, A, B, C).get_d();
    double N = G.order();
    rep.rhs_l2 = rep.max_coeff * std::sqrt(N / B.size()) * std::sqrt(N / C.size());
    double minsz = static_cast<double>(std::min({A.size(), B.size(), C.size()}));
    rep.rhs_d = rep.max_coeff * (N / minsz);
    rep.bound2_holds = std::abs(rep.star - 1) <= rep.rhs_l2 + kTol;
    rep.bound2d_holds = std::abs(rep.star - 1) <= rep.rhs_d + kTol;
    return rep;
}

std::pair<Subset, Subset> rm_counterexample(const GroupSpec& G, int d) {
    need_vector_space(G, "rm_counterexample");
    if (d < 1 || d > G.rank()) fail_pre("rm_counterexample", "d outside [1, n]");
    Subset A, B;
    for (int x = 0; x < G.order(); ++x) {
        Elem e = G.coords(x);
        bool head_zero = std::all_of(e.begin(), e.begin() + d, [](int v) { return v == 0; });
        (head_zero ? B : A).push_back(x);
    }
    return {A, B};
}

Subset planted_subspace(const GroupSpec& G, int d, int w, int c, uint64_t seed) {
    need_vector_space(G, "planted_subspace");
    if (d < 1 || d > G.rank() || w < 0 || w > d || c < 0) fail_pre("planted_subspace", "bad parameters");
    GroupSpec H(std::vector<int>(d, G.p()));
    if (c > H.order()) fail_pre("planted_subspace", "c exceeds p^d");
    std::vector<char> head(H.order(), 0);
    for (int h = 0; h < H.order(); ++h) {
        Elem e = H.coords(h);
        head[h] = std::all_of(e.begin() + w, e.end(), [](int v) { return v == 0; });
    }
    std::vector<int> pool(H.order());
    std::iota(pool.begin(), pool.end(), 0);
    Rng rng(stage_seed(seed, "planted"));
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int i = 0; i < c; ++i) head[pool[i]] = 1;
    Subset A;
    for (int x = 0; x < G.order(); ++x) {
        Elem e = G.coords(x);
        if (head[H.index(Elem(e.begin(), e.begin() + d))]) A.push_back(x);
    }
    return A;
}

}  // namespace apc
