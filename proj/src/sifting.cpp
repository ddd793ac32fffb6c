#include "apc/sifting.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <limits>
#include <map>

namespace apc {

// ---------------- weighted pigeonhole ----------------

namespace {

int pigeonhole_core(const std::vector<double>& g, const std::vector<double>& h) {
    double sg = 0, sh = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        sg += g[i];
        sh += h[i];
    }
    if (sh <= 0) fail_pre("weighted_pigeonhole", "sum of h is zero");
    if (sg == 0) return static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin());
    double eta = sg / sh;
    for (size_t i = 0; i < g.size(); ++i)
        if (h[i] > 0 && g[i] <= eta * h[i]) return static_cast<int>(i);
    // unreachable in exact arithmetic; fall back to the smallest ratio under rounding
    int best = -1;
    for (size_t i = 0; i < g.size(); ++i)
        if (h[i] > 0 && (best < 0 || g[i] / h[i] < g[best] / h[best])) best = static_cast<int>(i);
    return best;
}

}  // namespace

int weighted_pigeonhole(const std::vector<double>& g, const std::vector<double>& h, const std::string& variant,
                        const PigeonholeParams& params) {
    if (g.size() != h.size() || g.empty()) fail_pre("weighted_pigeonhole", "length mismatch");
    for (size_t i = 0; i < g.size(); ++i)
        if (g[i] < 0 || h[i] < 0) fail_pre("weighted_pigeonhole", "negative entry");
    double sh = 0;
    for (double x : h) sh += x;
    if (sh <= 0) fail_pre("weighted_pigeonhole", "sum of h is zero");
    std::vector<char> keep(h.size(), 1);
    if (variant == "i") {
        return pigeonhole_core(g, h);
    } else if (variant == "ii") {
        double mu = sh / h.size();
        for (size_t i = 0; i < h.size(); ++i) keep[i] = h[i] >= mu / 2;
    } else if (variant == "iii") {
        if (params.H <= 0 || params.tau <= 0) fail_pre("weighted_pigeonhole", "H and tau must be positive");
        double s = 0;
        for (size_t i = 0; i < h.size(); ++i)
            if (h[i] >= params.H) s += h[i];
        if (s < params.tau * sh) fail_pre("weighted_pigeonhole", "infeasible (H, tau)");
        for (size_t i = 0; i < h.size(); ++i) keep[i] = h[i] >= params.H;
    } else if (variant == "iv") {
        if (params.tau <= 0) fail_pre("weighted_pigeonhole", "tau must be positive");
        std::fill(keep.begin(), keep.end(), 0);
        double s = 0;
        for (int i : params.I) {
            if (i < 0 || i >= static_cast<int>(h.size())) fail_pre("weighted_pigeonhole", "index out of range");
            keep[i] = 1;
        }
        for (size_t i = 0; i < h.size(); ++i)
            if (keep[i]) s += h[i];
        if (s < params.tau * sh) fail_pre("weighted_pigeonhole", "infeasible (I, tau)");
    } else {
        fail_pre("weighted_pigeonhole", "unknown variant '" + variant + "'");
    }
    std::vector<double> g2(g.size()), h2(h.size());
    for (size_t i = 0; i < g.size(); ++i) {
        g2[i] = keep[i] ? g[i] : 0;
        h2[i] = keep[i] ? h[i] : 0;
    }
    return pigeonhole_core(g2, h2);
}

// ---------------- search engine ----------------

namespace {

struct Bits {
    std::vector<uint64_t> w;
    Bits() = default;
    explicit Bits(int n) : w((n + 63) / 64, 0) {}
    void set(int i) { w[i >> 6] |= 1ULL << (i & 63); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1ULL; }
    int count() const {
        int c = 0;
        for (auto x : w) c += __builtin_popcountll(x);
        return c;
    }
    void and_with(const Bits& o) {
        for (size_t i = 0; i < w.size(); ++i) w[i] &= o.w[i];
    }
    Subset elems() const {
        Subset out;
        for (size_t i = 0; i < w.size(); ++i) {
            uint64_t x = w[i];
            while (x) {
                int b = __builtin_ctzll(x);
                out.push_back(static_cast<int>(i * 64 + b));
                x &= x - 1;
            }
        }
        return out;
    }
};

Bits to_bits(int n, const Subset& A) {
    Bits b(n);
    for (int a : A) b.set(a);
    return b;
}

enum class PairKind { SelfDiff, PairDiff, LocalSum };

struct Engine {
    const GroupSpec* G = nullptr;
    PairKind kind = PairKind::SelfDiff;
    int L = 0;
    std::vector<int> universe;
    std::vector<Bits> base;
    std::vector<std::vector<Bits>> masks;  // masks[t][u]
    std::vector<double> f;
    QFn fq;
    Rational cap;              // certified iff ratio <= cap
    double cap_d = 0;
    std::vector<long long> need;  // per-set minimum size
    long long need_product = 0;   // minimum of size product (local)
    long long node_cap = 0;

    struct Found {
        std::vector<int> tuple;  // universe indices
        std::vector<Bits> sets;
        double ratio = 0;
        Rational ratio_q;
        bool ok = false;
    };

    bool sizes_ok(const std::vector<Bits>& s) const {
        long long prod = 1;
        for (size_t t = 0; t < s.size(); ++t) {
            long long c = s[t].count();
            if (c == 0 || c < need[t]) return false;
            prod *= c;
        }
        return prod >= need_product;
    }

    // pair histogram over the working group
    std::vector<long long> histogram(const std::vector<Bits>& s) const {
        std::vector<long long> hist(G->order(), 0);
        Subset a = s[0].elems();
        Subset b = s.size() > 1 ? s[1].elems() : a;
        for (int x : a)
            for (int y : b) ++hist[kind == PairKind::LocalSum ? G->add(x, y) : G->sub(x, y)];
        return hist;
    }

    double ratio_float(const std::vector<Bits>& s, long long& h) const {
        Subset a = s[0].elems();
        Subset b = s.size() > 1 ? s[1].elems() : a;
        h = static_cast<long long>(a.size()) * static_cast<long long>(b.size());
        double g = 0;
        for (int x : a)
            for (int y : b) g += f[kind == PairKind::LocalSum ? G->add(x, y) : G->sub(x, y)];
        return g / static_cast<double>(h);
    }

    Rational ratio_exact(const std::vector<Bits>& s) const {
        auto hist = histogram(s);
        Rational g = 0;
        long long h = 0;
        for (int x = 0; x < G->order(); ++x) {
            if (!hist[x]) continue;
            h += hist[x];
            if (fq.v[x] != 0) g += fq.v[x] * static_cast<long>(hist[x]);
        }
        return g / static_cast<long>(h);
    }

    bool certify(const std::vector<Bits>& s, double& r, Rational& rq) const {
        if (!sizes_ok(s)) return false;
        long long h = 0;
        r = ratio_float(s, h);
        if (r > cap_d * (1 + 1e-9) + 1e-12) return false;
        rq = ratio_exact(s);
        r = rq.get_d();
        return rq <= cap;
    }

    std::vector<Bits> apply(const std::vector<Bits>& s, int ui) const {
        std::vector<Bits> out = s;
        for (size_t t = 0; t < out.size(); ++t) out[t].and_with(masks[t][ui]);
        return out;
    }

    // DFS over nondecreasing tuples in lex order below a prefix
    bool dfs(std::vector<int>& tuple, const std::vector<Bits>& s, bool best, Found& found,
             std::atomic<long long>& nodes, std::atomic<int>& stop_first) const {
        if (nodes.fetch_add(1) >= node_cap) return false;
        if (!sizes_ok(s)) return false;
        if (static_cast<int>(tuple.size()) == L) {
            double r;
            Rational rq;
            if (certify(s, r, rq)) {
                if (!found.ok || (best && rq < found.ratio_q)) {
                    found = Found{tuple, s, r, rq, true};
                }
                return !best;
            }
            return false;
        }
        int start = tuple.empty() ? 0 : tuple.back();
        for (int ui = start; ui < static_cast<int>(universe.size()); ++ui) {
            if (!best && !tuple.empty() && tuple[0] > stop_first.load()) return false;
            tuple.push_back(ui);
            bool done = dfs(tuple, apply(s, ui), best, found, nodes, stop_first);
            tuple.pop_back();
            if (done) return true;
            if (nodes.load() >= node_cap) return false;
        }
        return false;
    }

    SiftOutcome run(const SearchBudget& budget, const std::string& variant) const {
        SiftOutcome out;
        out.variant = variant;
        std::atomic<long long> nodes{0};
        Found result;
        if (budget.mode == SearchMode::Exhaustive) {
            if (L == 0) {
                double r;
                Rational rq;
                if (certify(base, r, rq)) result = Found{{}, base, r, rq, true};
                nodes = 1;
            } else {
                int U = static_cast<int>(universe.size());
                std::vector<Found> per(U);
                std::atomic<int> stop_first{INT_MAX};
#pragma omp parallel for schedule(dynamic, 1)
                for (int u0 = 0; u0 < U; ++u0) {
                    if (!budget.best && u0 > stop_first.load()) continue;
                    std::vector<int> tuple{u0};
                    Found f;
                    if (dfs(tuple, apply(base, u0), budget.best, f, nodes, stop_first) || f.ok) {
                        per[u0] = f;
                        if (!budget.best) {
                            int cur = stop_first.load();
                            while (u0 < cur && !stop_first.compare_exchange_weak(cur, u0)) {
                            }
                        }
                    }
                }
                for (int u0 = 0; u0 < U; ++u0) {
                    if (!per[u0].ok) continue;
                    if (!result.ok || (budget.best && per[u0].ratio_q < result.ratio_q)) result = per[u0];
                    if (!budget.best) break;
                }
            }
            out.budget_exhausted = nodes.load() >= node_cap;
        } else {
            Rng rng(stage_seed(budget.seed, "sift/" + variant));
            std::uniform_int_distribution<int> pick(0, static_cast<int>(universe.size()) - 1);
            Found best_any;
            double best_any_ratio = std::numeric_limits<double>::infinity();
            for (long long t = 0; t < budget.samples; ++t) {
                std::vector<int> tuple(L);
                std::vector<Bits> s = base;
                for (int j = 0; j < L; ++j) {
                    tuple[j] = pick(rng);
                    s = apply(s, tuple[j]);
                }
                ++out.tried;
                double r;
                Rational rq;
                if (certify(s, r, rq)) {
                    ++out.successes;
                    if (!result.ok || rq < result.ratio_q) result = Found{tuple, s, r, rq, true};
                } else if (!result.ok) {
                    bool nonempty = std::all_of(s.begin(), s.end(), [](const Bits& b) { return b.count() > 0; });
                    long long h = 0;
                    if (nonempty) {
                        double rr = ratio_float(s, h);
                        if (rr < best_any_ratio) {
                            best_any_ratio = rr;
                            best_any = Found{tuple, s, rr, exact(rr), false};
                        }
                    }
                }
            }
            nodes = out.tried;
            if (!result.ok) result = best_any;
        }
        out.nodes = nodes.load();
        out.certified = result.ok;
        if (!result.sets.empty()) {
            for (int ui : result.tuple) out.shifts.push_back(universe[ui]);
            for (const auto& b : result.sets) {
                out.sets.push_back(b.elems());
                out.achieved_sizes.push_back(static_cast<long long>(out.sets.back().size()));
            }
            out.achieved_ratio = result.ratio;
            out.achieved_ratio_exact = result.ok ? result.ratio_q.get_str() : "";
        }
        out.guarantee_ratio_exact = cap.get_str();
        out.guarantee_ratio = cap.get_d();
        return out;
    }
};

QFn exact_fn(const RealFn& f) {
    QFn q(f.G);
    for (int i = 0; i < f.size(); ++i) {
        if (f.v[i] < 0) fail_pre("sift", "f must be nonnegative");
        q.v[i] = exact(f.v[i]);
    }
    return q;
}

Rational qpow(const Rational& b, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= b;
    return r;
}

mpz_class zpow(long long b, int k) {
    mpz_class r = 1;
    for (int i = 0; i < k; ++i) r *= static_cast<long>(b);
    return r;
}

long long ceil_q(const Rational& q) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return c.get_si();
}

std::vector<int> all_elements(const GroupSpec& G) {
    std::vector<int> u(G.order());
    for (int i = 0; i < G.order(); ++i) u[i] = i;
    return u;
}

Engine base_engine(const GroupSpec& G, PairKind kind, int L, const RealFn& f, const SearchBudget& budget) {
    Engine e;
    e.G = &G;
    e.kind = kind;
    e.L = L;
    e.f = f.v;
    e.fq = exact_fn(f);
    e.node_cap = budget.node_cap > 0 ? budget.node_cap : search_budget();
    return e;
}

void check_group(const GroupSpec& G, const RealFn& f) {
    if (!(f.G == G)) fail_pre("sift", "function lives on a different group");
}

}  // namespace

// ---------------- the three lemmas ----------------

namespace {

struct SelfSetup {
    Engine e;
    Rational eta;         // sum R^k f / sum R^k
    Rational size_bound;  // 1/2 sum R^k / |A|^k
};

SelfSetup setup_self(const GroupSpec& G, const Subset& A, const RealFn& f, int k, const SearchBudget& budget,
                     const std::vector<int>& universe) {
    if (A.empty()) fail_pre("sift_self", "empty set");
    if (k < 2) fail_pre("sift_self", "k must be at least 2");
    check_group(G, f);
    SelfSetup s{base_engine(G, PairKind::SelfDiff, k - 1, f, budget), 0, 0};
    auto R = rep_counts(G, A, A, RepKind::Difference).counts;
    Rational num = 0;
    mpz_class den = 0;
    for (int x = 0; x < G.order(); ++x) {
        if (!R[x]) continue;
        mpz_class p = zpow(R[x], k);
        den += p;
        num += Rational(p) * s.e.fq.v[x];
    }
    s.eta = num / Rational(den);
    s.size_bound = frac(den, zpow(static_cast<long long>(A.size()), k)) / 2;
    s.e.universe = universe;
    s.e.base = {to_bits(G.order(), A)};
    s.e.masks.assign(1, {});
    for (int u : universe) {
        Bits b(G.order());
        for (int a : A) b.set(G.add(a, u));
        s.e.masks[0].push_back(b);
    }
    s.e.cap = 2 * s.eta;
    s.e.cap_d = s.e.cap.get_d();
    s.e.need = {ceil_q(s.size_bound)};
    return s;
}

}  // namespace

SiftOutcome sift_self(const GroupSpec& G, const Subset& A, const RealFn& f, int k, const SearchBudget& budget) {
    auto s = setup_self(G, A, f, k, budget, all_elements(G));
    SiftOutcome out = s.e.run(budget, "self");
    out.guarantee_sizes = {s.size_bound.get_d()};
    return out;
}

SiftOutcome sift_pair(const GroupSpec& G, const Subset& A, const Subset& B, const RealFn& f, int k,
                      const SearchBudget& budget) {
    if (A.empty() || B.empty()) fail_pre("sift_pair", "empty set");
    if (k < 2) fail_pre("sift_pair", "k must be at least 2");
    check_group(G, f);
    Engine e = base_engine(G, PairKind::PairDiff, k - 1, f, budget);
    auto R = rep_counts(G, A, B, RepKind::Difference).counts;
    Rational num = 0;
    mpz_class den = 0;
    for (int x = 0; x < G.order(); ++x) {
        if (!R[x]) continue;
        mpz_class p = zpow(R[x], k);
        den += p;
        num += Rational(p) * e.fq.v[x];
    }
    Rational eta = num / Rational(den);
    Rational sa = frac(den, zpow(static_cast<long long>(B.size()), k)) / 4;
    Rational sb = frac(den, zpow(static_cast<long long>(A.size()), k)) / 4;
    e.universe = all_elements(G);
    e.base = {to_bits(G.order(), A), to_bits(G.order(), B)};
    e.masks.assign(2, {});
    for (int u : e.universe) {
        Bits ba(G.order()), bb(G.order());
        for (int a : A) ba.set(G.add(a, u));
        for (int b : B) bb.set(G.add(b, u));
        e.masks[0].push_back(ba);
        e.masks[1].push_back(bb);
    }
    e.cap = 2 * eta;
    e.cap_d = e.cap.get_d();
    e.need = {ceil_q(sa), ceil_q(sb)};
    SiftOutcome out = e.run(budget, "pair");
    out.guarantee_sizes = {sa.get_d(), sb.get_d()};
    return out;
}

namespace {

struct LocalSetup {
    Engine e;
    mpz_class den;
    Rational num;
    Rational size_bound;
    bool vacuous = false;
};

LocalSetup setup_local(const GroupSpec& G, const Subset& A, const Subset& B, const Subset& C, const RealFn& f,
                       int k, const SearchBudget& budget) {
    if (A.empty() || B.empty() || C.empty()) fail_pre("sift_local", "empty set");
    if (k < 1) fail_pre("sift_local", "k must be at least 1");
    check_group(G, f);
    LocalSetup s{base_engine(G, PairKind::LocalSum, k, f, budget), 0, 0, 0};
    auto RA = rep_counts(G, A, A, RepKind::Difference).counts;
    auto RBC = rep_counts(G, B, C, RepKind::Sum).counts;
    for (int x = 0; x < G.order(); ++x) {
        if (!RA[x] || !RBC[x]) continue;
        mpz_class p = zpow(RA[x], k) * static_cast<long>(RBC[x]);
        s.den += p;
        s.num += Rational(p) * s.e.fq.v[x];
    }
    s.vacuous = s.den == 0;
    s.e.universe = all_elements(G);
    s.e.base = {to_bits(G.order(), B), to_bits(G.order(), C)};
    s.e.masks.assign(2, {});
    for (int u : s.e.universe) {
        Bits bb(G.order()), bc(G.order());
        for (int a : A) {
            bb.set(G.sub(a, u));
            bc.set(G.sub(u, a));
        }
        s.e.masks[0].push_back(bb);
        s.e.masks[1].push_back(bc);
    }
    if (!s.vacuous) {
        s.e.cap = 2 * s.num / Rational(s.den);
        s.size_bound = frac(s.den, zpow(G.order(), k)) / 2;
    }
    s.e.cap_d = s.e.cap.get_d();
    s.e.need = {1, 1};
    s.e.need_product = std::max(1LL, ceil_q(s.size_bound));
    return s;
}

}  // namespace

SiftOutcome sift_local(const GroupSpec& G, const Subset& A, const Subset& B, const Subset& C, const RealFn& f,
                       int k, const SearchBudget& budget) {
    auto s = setup_local(G, A, B, C, f, k, budget);
    if (s.vacuous) {
        SiftOutcome out;
        out.variant = "local";
        out.vacuous = true;
        out.note = "zero denominator: vacuous instance";
        return out;
    }
    SiftOutcome out = s.e.run(budget, "local");
    out.guarantee_sizes = {s.size_bound.get_d()};
    return out;
}

// ---------------- corollaries ----------------

int robust_witness_k(double k, double eps) {
    if (eps < 0.5) return static_cast<int>(std::ceil(k + 2 * std::log2(32 / eps) / eps));
    return static_cast<int>(std::ceil(k + 20));
}

RobustWitness sift_robust_witness(const GroupSpec& G, const Subset& A, double k, double eps,
                                  const SearchBudget& budget) {
    if (k < 1) fail_pre("sift_robust_witness", "k < 1");
    if (eps <= 0) fail_pre("sift_robust_witness", "eps must be positive");
    RobustWitness w;
    QFn AA = self_crosscorr_q(G, A);
    RealFn AAd = AA.to_real();
    double norm = knorm(AAd, k);
    if (norm < 1 + eps - 1e-12)
        fail_pre("sift_robust_witness", "hypothesis ||A⋆A||_k >= 1+eps fails (" + std::to_string(norm) + ")");
    w.k_used = std::max(2, robust_witness_k(k, eps));
    w.eps_bar = std::min(1.0, eps);
    Rational thr = 1 + exact(eps) / 2;
    RealFn f(G);
    for (int x = 0; x < G.order(); ++x)
        if (AA.v[x] <= thr) {
            w.S.push_back(x);
            f.v[x] = 1;
        }
    auto s = setup_self(G, A, f, w.k_used, budget, all_elements(G));
    Rational lemma_cap = s.e.cap;
    Rational cor_cap = exact(w.eps_bar) / 16;
    s.e.cap = std::min(lemma_cap, cor_cap);
    s.e.cap_d = s.e.cap.get_d();
    w.outcome = s.e.run(budget, "robust");
    if (!w.outcome.certified) {
        w.note = "stage robust_witness: no shift tuple meets <A'⋆A',1_S> <= eps_bar/16; falling back to the lemma bound";
        s.e.cap = lemma_cap;
        s.e.cap_d = lemma_cap.get_d();
        w.outcome = s.e.run(budget, "robust");
    }
    w.outcome.guarantee_sizes = {s.size_bound.get_d()};
    w.outcome.guarantee_ratio = lemma_cap.get_d();
    w.outcome.guarantee_ratio_exact = lemma_cap.get_str();
    if (!w.outcome.sets.empty() && !w.outcome.sets[0].empty()) {
        const Subset& Ap = w.outcome.sets[0];
        QFn ApAp = self_crosscorr_q(G, Ap);
        QFn ind(G);
        for (int x : w.S) ind.v[x] = 1;
        Rational mass = inner(ApAp, ind);
        w.witness_mass = mass.get_d();
        w.corollary_certified = w.outcome.certified && mass <= cor_cap;
        Rational chain = inner(ApAp, AA);
        w.chain_value = chain.get_d();
        w.chain_holds = chain >= 1 + exact(eps) / 4;
    }
    return w;
}

LocalWitness sift_local_witness(const GroupSpec& G, const Subset& A, const Subset& B, const Subset& C, int k,
                                double eps, int kprime, const SearchBudget& budget) {
    if (eps < 0 || eps > 1) fail_pre("sift_local_witness", "eps outside [0,1]");
    if (kprime < k) fail_pre("sift_local_witness", "k' < k");
    LocalWitness w;
    QFn AA = self_crosscorr_q(G, A);
    RealFn AAd = AA.to_real();
    RealFn BC = convolve(indicator_density(G, B), indicator_density(G, C));
    w.hypothesis_norm = weighted_knorm(AAd, k, BC);
    if (w.hypothesis_norm < 1 + 2 * eps - 1e-12)
        fail_pre("sift_local_witness", "hypothesis ||A⋆A||_{k,B*C} >= 1+2eps fails");
    RealFn f(G);
    Rational thr = 1 + exact(eps);
    for (int x = 0; x < G.order(); ++x)
        if (AA.v[x] <= thr) {
            f.v[x] = 1;
            w.f_support.push_back(x);
        }
    double d = std::log2(static_cast<double>(G.order()) / A.size());
    w.corollary_ratio_bound = 2 * std::pow((1 + eps) / (1 + 2 * eps), kprime);
    w.corollary_ratio_simple = 2 * std::pow(2.0, -eps * kprime / 2);
    w.size_ratio_bound = 0.5 * std::pow(2.0, -2 * d * kprime);
    auto s = setup_local(G, A, B, C, f, kprime, budget);
    if (s.vacuous) {
        w.outcome.variant = "local-witness";
        w.outcome.vacuous = true;
        return w;
    }
    w.outcome = s.e.run(budget, "local-witness");
    w.outcome.guarantee_sizes = {s.size_bound.get_d()};
    if (w.outcome.certified) {
        double prod = static_cast<double>(w.outcome.achieved_sizes[0]) * w.outcome.achieved_sizes[1];
        w.size_ratio = prod / (static_cast<double>(B.size()) * C.size());
        w.corollary_certified = w.outcome.achieved_ratio <= w.corollary_ratio_bound + kTol &&
                                w.corollary_ratio_bound <= w.corollary_ratio_simple + kTol &&
                                w.size_ratio >= w.size_ratio_bound * (1 - 1e-12);
    }
    return w;
}

// ---------------- extended Pre-BSG ----------------

namespace {

PreBsgOutcome pre_bsg_core(const GroupSpec& G, const Subset& A, int k, double c, const SearchBudget& budget,
                           const std::vector<int>& universe) {
    if (A.empty()) fail_pre("extended_pre_bsg", "empty set");
    if (k < 2) fail_pre("extended_pre_bsg", "k must be at least 2");
    if (c <= 0) fail_pre("extended_pre_bsg", "c must be positive");
    PreBsgOutcome out;
    auto R = rep_counts(G, A, A, RepKind::Difference).counts;
    mpz_class sum = 0;
    for (long long r : R)
        if (r) sum += zpow(r, k);
    long long n = static_cast<long long>(A.size());
    Rational kappa = frac(sum, zpow(n, k + 1));
    out.kappa = kappa.get_d();
    out.kappa_exact = kappa.get_str();
    // R(x) <= c kappa^(1/(k-1)) |A|  <=>  R(x)^(k-1) <= c^(k-1) kappa |A|^(k-1)
    Rational cq = exact(c);
    Rational rhs = qpow(cq, k - 1) * kappa * Rational(zpow(n, k - 1));
    RealFn f(G);
    for (int x = 0; x < G.order(); ++x)
        if (R[x] && Rational(zpow(R[x], k - 1)) <= rhs) f.v[x] = 1;
    auto s = setup_self(G, A, f, k, budget, universe);
    out.outcome = s.e.run(budget, "prebsg");
    out.outcome.guarantee_sizes = {s.size_bound.get_d()};
    out.ratio_bound = 2 * std::pow(c, k - 1);
    out.size_bound = out.kappa * n / 2;
    if (out.outcome.certified) {
        Rational rq(out.outcome.achieved_ratio_exact);
        out.certified = rq <= 2 * qpow(cq, k - 1) &&
                        Rational(static_cast<long>(out.outcome.achieved_sizes[0])) >= kappa * Rational(static_cast<long>(n)) / 2;
    }
    return out;
}

}  // namespace

PreBsgOutcome extended_pre_bsg(const GroupSpec& G, const Subset& A, int k, double c, const SearchBudget& budget) {
    return pre_bsg_core(G, A, k, c, budget, all_elements(G));
}

PreBsgOutcome extended_pre_bsg(const std::vector<long long>& Az, int k, double c, const SearchBudget& budget) {
    if (Az.empty()) fail_pre("extended_pre_bsg", "empty set");
    std::vector<long long> A = Az;
    std::sort(A.begin(), A.end());
    if (std::adjacent_find(A.begin(), A.end()) != A.end()) fail_pre("extended_pre_bsg", "duplicate element");
    long long lo = A.front(), span = A.back() - A.front();
    long long M = 2 * span + 2;  // no wraparound for sums of two differences
    GroupSpec G = make_group({static_cast<int>(std::max(2LL, M))});
    Subset S;
    for (long long a : A) S.push_back(static_cast<int>(a - lo));
    // shifts restricted to A - A
    std::vector<int> uni;
    for (long long a : A)
        for (long long b : A) uni.push_back(static_cast<int>(((a - b) % M + M) % M));
    std::sort(uni.begin(), uni.end());
    uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
    PreBsgOutcome out = pre_bsg_core(G, S, k, c, budget, uni);
    if (!out.outcome.sets.empty())
        for (int x : out.outcome.sets[0]) out.subset_z.push_back(x + lo);
    for (int s : out.outcome.shifts) out.shifts_z.push_back(s > span ? s - M : s);
    return out;
}

// ---------------- identities ----------------

bool power_identity_holds(const GroupSpec& G, const Subset& A, int k) {
    if (k < 1) fail_pre("power_identity", "k < 1");
    int n = G.order();
    auto R = rep_counts(G, A, A, RepKind::Difference).counts;
    std::vector<mpz_class> acc(n, 0);
    mpz_class total = 0;
    std::vector<int> s(k - 1, 0);
    while (true) {
        Subset Ap;
        for (int a : A) {
            bool in = true;
            for (int sj : s) in = in && std::binary_search(A.begin(), A.end(), G.sub(a, sj));
            if (in) Ap.push_back(a);
        }
        total += static_cast<long>(Ap.size());
        for (int a : Ap)
            for (int b : Ap) acc[G.sub(a, b)] += 1;
        int i = k - 2;
        while (i >= 0 && ++s[i] == n) s[i--] = 0;
        if (i < 0) break;
    }
    for (int x = 0; x < n; ++x)
        if (acc[x] != zpow(R[x], k)) return false;
    return total == zpow(static_cast<long long>(A.size()), k);
}

SiftGuarantees self_guarantees(const GroupSpec& G, const Subset& A, int k) {
    auto R = rep_counts(G, A, A, RepKind::Difference).counts;
    mpz_class sum = 0;
    for (long long r : R)
        if (r) sum += zpow(r, k);
    SiftGuarantees g;
    g.counting_size = frac(sum, zpow(static_cast<long long>(A.size()), k)) / 2;
    double delta = static_cast<double>(A.size()) / G.order();
    RealFn AA = crosscorr(indicator_density(G, A), indicator_density(G, A));
    g.density_size = 0.5 * std::pow(delta, k) * std::pow(knorm(AA, k), k) * G.order();
    return g;
}

}  // namespace apc
