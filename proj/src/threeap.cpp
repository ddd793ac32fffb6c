#include "apc/threeap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

namespace apc {

namespace {

struct PointHash {
    size_t operator()(const Point& p) const {
        uint64_t h = 1469598103934665603ULL;
        for (long long v : p) h = splitmix64(h ^ static_cast<uint64_t>(v));
        return static_cast<size_t>(h);
    }
};
using PointSet = std::unordered_set<Point, PointHash>;

long long floor_div2(long long s) { return s >= 0 ? s / 2 : -((-s + 1) / 2); }

double lg_pos(double x) { return std::log2(x); }

Point sum_pt(const Point& a, const Point& b) {
    Point r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

std::string hash_points(const std::vector<long long>& N, const std::vector<Point>& A) {
    std::string s;
    for (long long n : N) s += std::to_string(n) + ",";
    s += "|";
    std::vector<Point> sorted = A;
    std::sort(sorted.begin(), sorted.end());
    for (const Point& p : sorted) {
        for (long long v : p) s += std::to_string(v) + ",";
        s += ";";
    }
    return hex64(fnv1a(s));
}

// Dense grid over prod [1, N_i] with r-dimensional prefix sums.
class BoxCounter {
public:
    BoxCounter(const std::vector<long long>& N, const std::vector<Point>& pts) : N_(N), r_(N.size()) {
        long long vol = 1;
        for (long long n : N) vol *= (n + 1);
        if (vol > 50'000'000) fail_budget("box_counter", "box too large for prefix sums");
        stride_.assign(r_, 1);
        for (int i = static_cast<int>(r_) - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * (N_[i + 1] + 1);
        S_.assign(static_cast<size_t>(vol), 0);
        for (const Point& p : pts) S_[offset(p)] += 1;
        for (size_t d = 0; d < r_; ++d)
            for (size_t idx = 0; idx < S_.size(); ++idx) {
                long long c = (static_cast<long long>(idx) / stride_[d]) % (N_[d] + 1);
                if (c > 0) S_[idx] += S_[idx - stride_[d]];
            }
    }
    // points in prod [lo_i, hi_i], clipped to the grid
    long long count(const std::vector<long long>& lo, const std::vector<long long>& hi) const {
        std::vector<long long> l(r_), h(r_);
        for (size_t i = 0; i < r_; ++i) {
            l[i] = std::max(1LL, lo[i]);
            h[i] = std::min(N_[i], hi[i]);
            if (l[i] > h[i]) return 0;
        }
        long long total = 0;
        for (unsigned mask = 0; mask < (1u << r_); ++mask) {
            long long off = 0;
            int sign = 1;
            bool zero = false;
            for (size_t i = 0; i < r_; ++i) {
                long long c = (mask >> i) & 1 ? l[i] - 1 : h[i];
                if ((mask >> i) & 1) sign = -sign;
                if (c <= 0) zero = true;
                off += c * stride_[i];
            }
            if (!zero) total += sign * S_[off];
        }
        return total;
    }

private:
    size_t offset(const Point& p) const {
        long long o = 0;
        for (size_t i = 0; i < r_; ++i) o += p[i] * stride_[i];
        return static_cast<size_t>(o);
    }
    std::vector<long long> N_;
    size_t r_;
    std::vector<long long> stride_;
    std::vector<long long> S_;
};

// R_A(2z) for every z in A
std::vector<long long> reps_at_double(const std::vector<Point>& A) {
    std::unordered_map<Point, long long, PointHash> R;
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A.size(); ++j) ++R[sum_pt(A[i], A[j])];
    std::vector<long long> out;
    for (const Point& z : A) {
        auto it = R.find(sum_pt(z, z));
        out.push_back(it == R.end() ? 0 : it->second);
    }
    return out;
}

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

}  // namespace

long long Configuration::volume() const {
    long long v = 1;
    for (long long n : N) v *= n;
    return v;
}
double Configuration::density() const { return static_cast<double>(A.size()) / static_cast<double>(volume()); }
double Configuration::d() const { return -std::log2(density()); }

Configuration make_configuration(std::vector<long long> N, std::vector<Point> A) {
    if (N.empty()) fail_pre("configuration", "box must have at least one side");
    for (long long n : N)
        if (n < 1) fail_pre("configuration", "box sides must be positive");
    std::sort(A.begin(), A.end());
    A.erase(std::unique(A.begin(), A.end()), A.end());
    if (A.empty()) fail_pre("configuration", "set must be nonempty");
    for (const Point& p : A) {
        if (p.size() != N.size()) fail_pre("configuration", "point dimension differs from the box");
        for (size_t i = 0; i < N.size(); ++i)
            if (p[i] < 1 || p[i] > N[i]) fail_pre("configuration", "point outside the box");
    }
    return Configuration{std::move(N), std::move(A)};
}

Configuration interval_configuration(long long N, const std::vector<long long>& A) {
    std::vector<Point> pts;
    for (long long a : A) pts.push_back(Point{a});
    return make_configuration({N}, pts);
}

ApCount count_3aps(const std::vector<long long>& A0) {
    std::vector<long long> A = A0;
    std::sort(A.begin(), A.end());
    A.erase(std::unique(A.begin(), A.end()), A.end());
    ApCount c;
    const long long n = static_cast<long long>(A.size());
    long long total = 0;
#pragma omp parallel for reduction(+ : total) schedule(dynamic, 16)
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j) {
            long long s = A[i] + A[j];
            if (s % 2 != 0) continue;
            if (std::binary_search(A.begin(), A.end(), s / 2)) ++total;
        }
    c.total = total;
    c.trivial = n;
    c.nontrivial = total - n;
    return c;
}

ApCount count_3aps(const std::vector<Point>& A0) {
    std::vector<Point> A = A0;
    std::sort(A.begin(), A.end());
    A.erase(std::unique(A.begin(), A.end()), A.end());
    PointSet set(A.begin(), A.end());
    ApCount c;
    const long long n = static_cast<long long>(A.size());
    long long total = 0;
#pragma omp parallel for reduction(+ : total) schedule(dynamic, 16)
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j) {
            Point s = sum_pt(A[i], A[j]);
            bool even = true;
            for (long long& v : s) {
                if (v % 2 != 0) {
                    even = false;
                    break;
                }
                v = floor_div2(v);
            }
            if (even && set.count(s)) ++total;
        }
    c.total = total;
    c.trivial = n;
    c.nontrivial = total - n;
    return c;
}

ApCount count_3aps(const Configuration& cfg) { return count_3aps(cfg.A); }

ApCount count_3aps(const GroupSpec& G, const Subset& A) {
    ApCount c;
    if (A.empty()) return c;
    auto R = rep_counts(G, A, A, RepKind::Sum).counts;
    for (int z : A) c.total += R[G.add(z, z)];
    c.trivial = static_cast<long long>(A.size());
    c.nontrivial = c.total - c.trivial;
    return c;
}

namespace {

// triples[i]: pairs (u, w) of smaller elements that close a nontrivial 3-AP with i
int max_free(int n, const std::vector<std::vector<std::pair<int, int>>>& closing) {
    std::vector<char> in(n, 0);
    int best = 0;
    auto rec = [&](auto&& self, int i, int size) -> void {
        if (size + (n - i) <= best) return;
        if (i == n) {
            best = size;
            return;
        }
        bool ok = true;
        for (auto [u, w] : closing[i])
            if (in[u] && in[w]) {
                ok = false;
                break;
            }
        if (ok) {
            in[i] = 1;
            self(self, i + 1, size + 1);
            in[i] = 0;
        }
        self(self, i + 1, size);
    };
    rec(rec, 0, 0);
    return best;
}

}  // namespace

int max_3ap_free_interval(int n) {
    if (n < 0 || n > 64) fail_pre("max_3ap_free", "n must lie in [0, 64]");
    std::vector<std::vector<std::pair<int, int>>> closing(n);
    for (int z = 0; z < n; ++z)
        for (int d = 1; z - d >= 0 && z + d < n; ++d) closing[z + d].push_back({z - d, z});
    return max_free(n, closing);
}

int max_3ap_free_group(const GroupSpec& G) {
    const int n = G.order();
    if (n > 64) fail_budget("max_3ap_free", "group order above 64");
    std::vector<std::vector<std::pair<int, int>>> closing(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            for (int z = 0; z < n; ++z) {
                if (G.add(x, y) != G.add(z, z)) continue;
                // x != y forces z to differ from both
                int t[3] = {x, y, z};
                std::sort(t, t + 3);
                closing[t[2]].push_back({t[0], t[1]});
            }
        }
    return max_free(n, closing);
}

BehrendReport behrend_sphere(long long N) {
    if (N < 2) fail_pre("behrend_sphere", "N must be at least 2");
    BehrendReport best;
    // digits in [0, d), base 2d - 1, fixed sum of squares: no carries, so x + y = 2z digitwise
    for (int n = 2; n < 64; ++n) {
        bool any = false;
        for (int d = 2;; ++d) {
            long long base = 2LL * d - 1;
            long double top = std::pow(static_cast<long double>(base), n);
            if ((top - 1) / 2 + 1 > static_cast<long double>(N)) break;
            any = true;
            std::map<long long, std::vector<long long>> shells;
            std::vector<int> digit(n, 0);
            while (true) {
                long long x = 0, s = 0;
                for (int i = n - 1; i >= 0; --i) {
                    x = x * base + digit[i];
                    s += static_cast<long long>(digit[i]) * digit[i];
                }
                shells[s].push_back(x + 1);
                int i = 0;
                while (i < n && digit[i] == d - 1) digit[i++] = 0;
                if (i == n) break;
                ++digit[i];
            }
            for (auto& [s, pts] : shells)
                if (pts.size() > best.set.size()) {
                    best.set = pts;
                    best.dim = n;
                    best.digits = d;
                    best.radius2 = s;
                }
        }
        if (!any) break;
    }
    if (best.set.empty()) best.set = {1};
    std::sort(best.set.begin(), best.set.end());
    best.density = static_cast<double>(best.set.size()) / N;
    best.certified = count_3aps(best.set).nontrivial == 0;
    return best;
}

BehrendReport behrend_set(long long N) {
    if (N < 2) fail_pre("behrend_set", "N must be at least 2");
    BehrendReport best;
    // integers whose base-3 digits are all 0 or 1, shifted into [N]
    for (long long x = 0; x + 1 <= N; ++x) {
        long long y = x;
        bool ok = true;
        while (y) {
            if (y % 3 == 2) {
                ok = false;
                break;
            }
            y /= 3;
        }
        if (ok) best.set.push_back(x + 1);
    }
    best.dim = 0;
    best.digits = 2;
    best.radius2 = -1;
    BehrendReport sphere = behrend_sphere(N);
    if (sphere.set.size() > best.set.size()) best = sphere;
    std::sort(best.set.begin(), best.set.end());
    best.density = static_cast<double>(best.set.size()) / N;
    best.certified = count_3aps(best.set).nontrivial == 0;
    return best;
}

IncrementCheck is_good_increment(const Configuration& cfg, const GoodIncrement& cand, const SpreadnessConfig& sc) {
    IncrementCheck out;
    auto bad = [&](const std::string& why) {
        out.malformed = why;
        return out;
    };
    if (cand.Aprime.empty()) return bad("empty subset");
    if (cand.Aprime.size() != cand.image.size()) return bad("map table is ragged");
    if (cand.Nprime.empty()) return bad("target box has no sides");
    PointSet src(cfg.A.begin(), cfg.A.end()), seen_src, seen_img;
    for (size_t i = 0; i < cand.Aprime.size(); ++i) {
        if (!src.count(cand.Aprime[i])) return bad("subset point outside A");
        if (!seen_src.insert(cand.Aprime[i]).second) return bad("subset lists a point twice");
        const Point& y = cand.image[i];
        if (y.size() != cand.Nprime.size()) return bad("image dimension differs from target box");
        for (size_t j = 0; j < y.size(); ++j)
            if (y[j] < 1 || y[j] > cand.Nprime[j]) return bad("image outside target box");
        if (!seen_img.insert(y).second) return bad("map is not injective");
    }
    out.well_formed = true;
    FreimanMap phi;
    phi.dom.moduli.assign(cfg.rank(), 0);
    phi.cod.moduli.assign(cand.Nprime.size(), 0);
    phi.x = cand.Aprime;
    phi.y = cand.image;
    out.hom = check_freiman(phi, 2);
    long double vol = 1;
    for (long long n : cand.Nprime) vol *= n;
    out.density_before = cfg.density();
    out.density_after = static_cast<double>(cand.Aprime.size() / vol);
    out.density_ok = out.density_after >= (1 + sc.eps) * out.density_before * (1 - 1e-12);
    const double d = std::max(1.0, cfg.d());
    out.r_prime = static_cast<int>(cand.Nprime.size());
    out.r_bound = cfg.rank() + sc.K * std::pow(d, sc.c);
    out.rank_ok = out.r_prime <= out.r_bound + kTol;
    out.lg_size = lg_pos(static_cast<double>(cand.Aprime.size()));
    out.lg_size_bound = lg_pos(static_cast<double>(cfg.A.size())) - sc.K * std::pow(d, sc.c) -
                        sc.K * std::pow(static_cast<double>(cfg.rank()), sc.c);
    out.size_ok = out.lg_size + kTol >= out.lg_size_bound;
    out.count_source = count_3aps(cand.Aprime);
    out.count_image = count_3aps(cand.image);
    out.monotone = out.count_image.total <= out.count_source.total;
    out.verified = out.hom.verified && out.density_ok && out.rank_ok && out.size_ok && out.monotone;
    return out;
}

NiceCheck check_nice(const Configuration& cfg, double delta) {
    NiceCheck c;
    const int r = cfg.rank();
    const double mu = cfg.density();
    std::set<long long> ps(cfg.N.begin(), cfg.N.end());
    c.primes = ps.size() == cfg.N.size() &&
               std::all_of(cfg.N.begin(), cfg.N.end(), [](long long n) { return n > 2 && is_prime(n); });
    c.upper = std::all_of(cfg.A.begin(), cfg.A.end(), [&](const Point& p) {
        for (int i = 0; i < r; ++i)
            if (p[i] < 2 * delta * cfg.N[i] - 1e-12 || p[i] > cfg.N[i]) return false;
        return true;
    });
    for (int i = 0; i < r; ++i) {
        c.v.push_back(static_cast<long long>(std::floor((0.5 + delta / 2) * cfg.N[i] + 1e-12)));
        c.m.push_back(static_cast<long long>(std::floor(delta * cfg.N[i] / 3 + 1e-12)));
    }
    c.widths_ok = std::all_of(c.m.begin(), c.m.end(), [](long long m) { return m >= 1; });
    // b - b' has weight prod (2m+1-|w|)/(2m+1)^2
    PointSet set(cfg.A.begin(), cfg.A.end());
    std::vector<long long> w(r);
    for (int i = 0; i < r; ++i) w[i] = -2 * c.m[i];
    double acc = 0;
    while (true) {
        double weight = 1;
        Point q(r);
        for (int i = 0; i < r; ++i) {
            double side = 2.0 * c.m[i] + 1;
            weight *= (side - std::abs(static_cast<double>(w[i]))) / (side * side);
            q[i] = c.v[i] + w[i];
        }
        if (set.count(q)) acc += weight;
        int i = r - 1;
        while (i >= 0 && w[i] == 2 * c.m[i]) {
            w[i] = -2 * c.m[i];
            --i;
        }
        if (i < 0) break;
        ++w[i];
    }
    c.middle_density = acc;
    c.middle = acc + 1e-12 >= mu / 2;
    auto R = reps_at_double(cfg.A);
    c.max_rep = R.empty() ? 0 : *std::max_element(R.begin(), R.end());
    c.rep_cap = mu * static_cast<double>(cfg.A.size()) / 4;
    c.reps = c.max_rep <= c.rep_cap + 1e-12;
    c.nice = c.primes && c.upper && c.widths_ok && c.middle && c.reps && delta <= 1.0 / (2 * r) + 1e-12;
    return c;
}

namespace {

int odd_primes_between(double lo, double hi) {
    int c = 0;
    for (long long p = std::max(3LL, static_cast<long long>(std::ceil(lo))); p <= static_cast<long long>(hi); ++p)
        if (p % 2 && is_prime(p)) ++c;
    return c;
}

// smallest n0 such that every n in [n0, limit] has at least need odd primes in [n/2, n]
int prime_threshold(int need, long long limit) {
    int n0 = 1;
    for (long long n = 1; n <= limit; ++n)
        if (odd_primes_between(n / 2.0, static_cast<double>(n)) < need) n0 = static_cast<int>(n + 1);
    return n0;
}

struct Working {
    std::vector<long long> N;
    std::vector<Point> pts;
    std::vector<int> src;  // index into cfg.A
    std::vector<int> coords;  // original coordinate of each working coordinate
};

}  // namespace

MakeNiceResult make_nice(const Configuration& cfg, double eps, const SpreadnessConfig& sc, uint64_t seed,
                         long long scan_cap) {
    if (!(eps > 0 && eps <= 0.1 + 1e-12)) fail_pre("make_nice", "eps must lie in (0, 1/10]");
    MakeNiceResult res;
    res.eps = eps;
    const int r0 = cfg.rank();
    res.delta = eps / (2.0 * r0);
    const double delta = res.delta;
    const double mu = cfg.density();

    Working w;
    w.N = cfg.N;
    w.pts = cfg.A;
    w.src.resize(cfg.A.size());
    std::iota(w.src.begin(), w.src.end(), 0);
    w.coords.resize(r0);
    std::iota(w.coords.begin(), w.coords.end(), 0);

    // fix coordinates whose sides are too short to hold the primes
    while (!w.N.empty()) {
        const int r = static_cast<int>(w.N.size());
        long long maxN = *std::max_element(w.N.begin(), w.N.end());
        res.n0 = prime_threshold(r + 1, static_cast<long long>(std::ceil(delta * maxN)) + 1);
        int small = static_cast<int>(std::min_element(w.N.begin(), w.N.end()) - w.N.begin());
        if (delta * w.N[small] >= res.n0) break;
        std::map<long long, long long> cnt;
        for (const Point& p : w.pts) ++cnt[p[small]];
        long long bx = cnt.begin()->first, bc = -1;
        for (auto [x, c] : cnt)
            if (c > bc) {
                bc = c;
                bx = x;
            }
        Working nw;
        nw.N = w.N;
        nw.N.erase(nw.N.begin() + small);
        nw.coords = w.coords;
        nw.coords.erase(nw.coords.begin() + small);
        for (size_t i = 0; i < w.pts.size(); ++i)
            if (w.pts[i][small] == bx) {
                Point q = w.pts[i];
                q.erase(q.begin() + small);
                nw.pts.push_back(q);
                nw.src.push_back(w.src[i]);
            }
        res.fixed_coords.push_back(w.coords[small]);
        w = std::move(nw);
    }
    if (w.N.empty()) fail_pre("make_nice", "no primes available: every coordinate is too short");
    const int r = static_cast<int>(w.N.size());

    // distinct odd primes in [delta N_i / 2, delta N_i], longest sides first
    std::vector<int> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w.N[a] > w.N[b]; });
    res.primes.assign(r, 0);
    std::set<long long> used;
    for (int i : order) {
        long long lo = std::max(3LL, static_cast<long long>(std::ceil(delta * w.N[i] / 2 - 1e-12)));
        long long hi = static_cast<long long>(std::floor(delta * w.N[i] + 1e-12));
        for (long long p = lo; p <= hi; ++p)
            if (p % 2 && is_prime(p) && !used.count(p)) {
                res.primes[i] = p;
                used.insert(p);
                break;
            }
        if (!res.primes[i]) fail_pre("make_nice", "no admissible prime for side " + std::to_string(w.N[i]));
    }

    // prune points with too many representations of 2x
    {
        auto R = reps_at_double(w.pts);
        double avg = std::accumulate(R.begin(), R.end(), 0.0) / static_cast<double>(R.size());
        Working nw;
        nw.N = w.N;
        nw.coords = w.coords;
        for (size_t i = 0; i < w.pts.size(); ++i)
            if (R[i] <= 4 / eps * avg + 1e-9) {
                nw.pts.push_back(w.pts[i]);
                nw.src.push_back(w.src[i]);
            }
        res.pruned = static_cast<long long>(w.pts.size() - nw.pts.size());
        w = std::move(nw);
    }
    long double wvol = 1;
    for (long long n : w.N) wvol *= n;
    const double mu_p = static_cast<double>(w.pts.size() / wvol);

    SafeSpec spec = make_safe_spec(res.primes, delta);
    std::vector<long long> v(r), m(r), ulo(r), uhi(r);
    for (int i = 0; i < r; ++i) {
        v[i] = static_cast<long long>(std::floor((0.5 + delta / 2) * res.primes[i] + 1e-12));
        m[i] = static_cast<long long>(std::floor(delta * res.primes[i] / 3 + 1e-12));
        ulo[i] = spec.U[i].first;
        uhi[i] = spec.U[i].second;
    }
    long double usize = 1, bsize = 1;
    for (int i = 0; i < r; ++i) {
        usize *= (uhi[i] - ulo[i] + 1);
        bsize *= (2 * m[i] + 1);
    }
    BoxCounter counter(w.N, w.pts);

    // translates a in prod [-p_i, N_i]
    std::vector<long long> span(r);
    long double total = 1;
    for (int i = 0; i < r; ++i) {
        span[i] = w.N[i] + res.primes[i] + 1;
        total *= span[i];
    }
    res.exhaustive = total <= static_cast<long double>(scan_cap);
    const long long count = res.exhaustive ? static_cast<long long>(total) : scan_cap;
    res.translates = count;
    std::vector<std::vector<long long>> trans(count, std::vector<long long>(r));
    {
        Rng rng(stage_seed(seed, "make_nice/translates"));
        for (long long t = 0; t < count; ++t) {
            if (res.exhaustive) {
                long long q = t;
                for (int i = r - 1; i >= 0; --i) {
                    trans[t][i] = -res.primes[i] + q % span[i];
                    q /= span[i];
                }
            } else {
                for (int i = 0; i < r; ++i)
                    trans[t][i] = std::uniform_int_distribution<long long>(-res.primes[i], w.N[i])(rng);
            }
        }
    }
    std::vector<double> mu1(count), mu2(count);
    std::vector<std::vector<long long>> bestb(count);
    std::vector<long long> bestb_count(count, -1);
#pragma omp parallel for schedule(static)
    for (long long t = 0; t < count; ++t) {
        const auto& a = trans[t];
        std::vector<long long> lo(r), hi(r);
        for (int i = 0; i < r; ++i) {
            lo[i] = a[i] + ulo[i];
            hi[i] = a[i] + uhi[i];
        }
        mu1[t] = static_cast<double>(counter.count(lo, hi) / usize);
        // average over b' of the box a + v - b' + C_m
        std::vector<long long> b(r);
        for (int i = 0; i < r; ++i) b[i] = -m[i];
        double acc = 0;
        long long nb = 0;
        while (true) {
            for (int i = 0; i < r; ++i) {
                lo[i] = a[i] + v[i] - b[i] - m[i];
                hi[i] = a[i] + v[i] - b[i] + m[i];
            }
            long long c = counter.count(lo, hi);
            if (c > bestb_count[t]) {
                bestb_count[t] = c;
                bestb[t] = b;
            }
            acc += static_cast<double>(c);
            ++nb;
            int i = r - 1;
            while (i >= 0 && b[i] == m[i]) {
                b[i] = -m[i];
                --i;
            }
            if (i < 0) break;
            ++b[i];
        }
        mu2[t] = static_cast<double>(acc / nb / bsize);
    }

    const double cap = (1 + eps) * mu_p;
    auto build_increment = [&](const std::vector<long long>& lo, const std::vector<long long>& hi,
                               const std::string& kind) {
        GoodIncrement g;
        for (int i = 0; i < r; ++i) g.Nprime.push_back(hi[i] - lo[i] + 1);
        for (size_t j = 0; j < w.pts.size(); ++j) {
            bool in = true;
            for (int i = 0; i < r; ++i)
                if (w.pts[j][i] < lo[i] || w.pts[j][i] > hi[i]) in = false;
            if (!in) continue;
            Point y(r);
            for (int i = 0; i < r; ++i) y[i] = w.pts[j][i] - lo[i] + 1;
            g.Aprime.push_back(cfg.A[w.src[j]]);
            g.image.push_back(y);
        }
        res.increment = g;
        res.increment_kind = kind;
    };
    // largest-count increment among translates that beat (1 + eps) mu'
    long long up_t = -1, mid_t = -1;
    double up_val = 0, mid_val = 0;
    for (long long t = 0; t < count; ++t) {
        if (mu1[t] > cap * (1 + 1e-12) && mu1[t] > up_val) {
            up_val = mu1[t];
            up_t = t;
        }
        double boxdens = static_cast<double>(bestb_count[t] / bsize);
        if (mu2[t] > cap * (1 + 1e-12) && boxdens > mid_val) {
            mid_val = boxdens;
            mid_t = t;
        }
    }
    if (up_t >= 0 || mid_t >= 0) {
        res.branch = NiceBranch::Increment;
        std::vector<long long> lo(r), hi(r);
        bool use_up = up_t >= 0 && (mid_t < 0 || up_val * static_cast<double>(usize) >=
                                                     mid_val * static_cast<double>(bsize));
        if (use_up) {
            res.a = trans[up_t];
            for (int i = 0; i < r; ++i) {
                lo[i] = res.a[i] + ulo[i];
                hi[i] = res.a[i] + uhi[i];
            }
            res.mu1 = mu1[up_t];
            res.mu2 = mu2[up_t];
        } else {
            res.a = trans[mid_t];
            for (int i = 0; i < r; ++i) {
                lo[i] = res.a[i] + v[i] - bestb[mid_t][i] - m[i];
                hi[i] = res.a[i] + v[i] - bestb[mid_t][i] + m[i];
            }
            res.mu1 = mu1[mid_t];
            res.mu2 = mu2[mid_t];
        }
        build_increment(lo, hi, use_up ? "upper" : "middle");
        res.increment_check = is_good_increment(cfg, res.increment, sc);
        const double dens = static_cast<double>(res.increment.Aprime.size()) /
                            std::accumulate(res.increment.Nprime.begin(), res.increment.Nprime.end(), 1.0,
                                            [](double x, long long y) { return x * static_cast<double>(y); });
        res.density_ratio = dens / mu;
        res.density_ok = res.density_ratio >= 1 + eps / 2 - 1e-12;
        res.certified = res.increment_check.well_formed && res.increment_check.hom.verified && res.density_ok;
        if (!res.increment_check.verified) res.note = "increment beats (1+eps/2) mu but fails the good-increment test";
        return res;
    }

    // choose the translate with the best min(mu1, mu2) among those above (1 - 4 eps) mu'
    long long pick = -1;
    double pick_val = -1;
    for (long long t = 0; t < count; ++t) {
        double lo = std::min(mu1[t], mu2[t]);
        if (mu1[t] + 1e-12 >= (1 - 4 * eps) * mu_p && mu2[t] + 1e-12 >= (1 - 4 * eps) * mu_p && lo > pick_val) {
            pick_val = lo;
            pick = t;
        }
    }
    if (pick < 0) {
        res.branch = NiceBranch::Nice;
        res.certified = false;
        res.note = "no translate satisfies both averaged density conditions";
        return res;
    }
    res.a = trans[pick];
    res.mu1 = mu1[pick];
    res.mu2 = mu2[pick];
    std::vector<Point> nice_pts;
    for (size_t j = 0; j < w.pts.size(); ++j) {
        bool in = true;
        Point y(r);
        for (int i = 0; i < r; ++i) {
            long long x = w.pts[j][i];
            if (x < res.a[i] + ulo[i] || x > res.a[i] + uhi[i]) in = false;
            y[i] = x - res.a[i];
        }
        if (!in) continue;
        nice_pts.push_back(y);
        res.source.push_back(cfg.A[w.src[j]]);
    }
    if (nice_pts.empty()) {
        res.branch = NiceBranch::Nice;
        res.certified = false;
        res.note = "chosen translate leaves no points";
        return res;
    }
    // keep source parallel to the sorted configuration
    std::vector<size_t> idx(nice_pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) { return nice_pts[x] < nice_pts[y]; });
    std::vector<Point> sp, ss;
    for (size_t i : idx) {
        sp.push_back(nice_pts[i]);
        ss.push_back(res.source[i]);
    }
    res.source = ss;
    res.nice = make_configuration(res.primes, sp);
    res.check = check_nice(res.nice, delta);
    res.density_ratio = res.nice.density() / mu;
    res.density_ok = res.density_ratio >= 1 - 5 * eps - 1e-12;
    if (res.check.primes && res.check.upper && res.check.widths_ok && res.check.middle && !res.check.reps) {
        res.branch = NiceBranch::ManyAPs;
        res.count = count_3aps(cfg.A);
        res.many_threshold = eps / 16 * res.nice.density() * static_cast<double>(cfg.A.size()) *
                             static_cast<double>(res.nice.A.size());
        res.many_ok = static_cast<double>(res.count.total) + 1e-9 >= res.many_threshold;
        res.certified = res.many_ok;
        return res;
    }
    res.branch = NiceBranch::Nice;
    FreimanMap phi;
    phi.dom.moduli.assign(r0, 0);
    phi.cod.moduli.assign(r, 0);
    phi.x = res.source;
    phi.y = res.nice.A;
    bool hom = check_freiman(phi, 2).verified;
    res.certified = res.check.nice && hom;
    if (!res.check.widths_ok) res.note = "middle-slice half-width below 1: rejected";
    else if (!res.check.nice) res.note = "niceness conditions fail at the chosen translate";
    return res;
}

long long crt_index(const std::vector<long long>& p, const Point& x) {
    long long M = 1;
    for (long long q : p) M *= q;
    long long s = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        long long Mi = M / p[i];
        long long xi = ((x[i] % p[i]) + p[i]) % p[i];
        long long t = xi * inv_mod(Mi % p[i], p[i]) % p[i];
        s = (s + static_cast<long long>((static_cast<__int128>(t) * Mi) % M)) % M;
    }
    return s;
}

EmbedReport embed_nice(const Configuration& cfg, double delta) {
    NiceCheck nc = check_nice(cfg, delta);
    if (!nc.nice) fail_pre("embed_nice", "configuration is not certified nice");
    EmbedReport rep;
    const int r = cfg.rank();
    rep.primes = cfg.N;
    long long M = 1;
    for (long long p : cfg.N) M *= p;
    if (M > size_budget()) fail_budget("embed_nice", "product of primes exceeds the size budget");
    rep.G = make_group({static_cast<int>(M)});
    for (const Point& x : cfg.A) rep.image.push_back(static_cast<int>(crt_index(cfg.N, x)));
    Subset img = rep.image;
    std::sort(img.begin(), img.end());

    Subset freqs;
    double rho = 2;
    for (int i = 0; i < r; ++i) {
        long long p = cfg.N[i];
        long long alpha = (p + 1) / 2;
        freqs.push_back(static_cast<int>(alpha * (M / p) % M));
        rho = std::min(rho, 2 * std::sin(M_PI * static_cast<double>(nc.m[i]) / static_cast<double>(p)));
    }
    rep.B = BohrSet{rep.G, freqs, rho};
    rep.B_members = bohr_members(rep.B);
    {
        std::set<int> box;
        std::vector<long long> b(r);
        for (int i = 0; i < r; ++i) b[i] = -nc.m[i];
        while (true) {
            Point q(r);
            for (int i = 0; i < r; ++i) q[i] = 2 * b[i];
            box.insert(static_cast<int>(crt_index(cfg.N, q)));
            int i = r - 1;
            while (i >= 0 && b[i] == nc.m[i]) {
                b[i] = -nc.m[i];
                --i;
            }
            if (i < 0) break;
            ++b[i];
        }
        rep.box_members.assign(box.begin(), box.end());
    }
    rep.bohr_exact = rep.B_members == rep.box_members;
    if (!rep.bohr_exact) rep.note = "no single radius reproduces every side of the box; the smaller Bohr set is used";

    const double d = -std::log2(cfg.density());
    int k = static_cast<int>(std::ceil((d + 1) / std::log2(1.5) - 1e-12));
    if (k < 2) k = 2;
    if (k % 2) ++k;
    rep.k = k;
    DensityFn Ad = indicator_density(rep.G, img);
    DensityFn Bd = indicator_density(rep.G, rep.B_members);
    RealFn F = crosscorr(Ad, Ad);
    RealFn BB = crosscorr(Bd, Bd);
    rep.norm = weighted_knorm(F, k, BB);
    rep.margin = rep.norm - 1;
    rep.margin_ok = rep.margin + 1e-9 >= 0.25;
    RealFn H = add_const(convolve(Ad, Ad), -1);
    Point twov(r);
    for (int i = 0; i < r; ++i) twov[i] = 2 * nc.v[i];
    RealFn D = translate(BB, static_cast<int>(crt_index(cfg.N, twov)));
    rep.centered_norm = weighted_knorm(H, k, D);
    rep.centered_ok = rep.centered_norm + 1e-9 >= 0.5;
    rep.regular = is_regular(rep.B).regular;

    // 2-safety of B with respect to phi on A: every translate's pullback is a 2-homomorphism
    rep.safe = true;
    std::vector<char> inB(M, 0);
    for (int b : rep.B_members) inB[b] = 1;
    for (long long theta = 0; theta < M; ++theta) {
        FreimanMap phi;
        phi.dom.moduli.assign(r, 0);
        phi.cod.moduli = {M};
        for (size_t i = 0; i < cfg.A.size(); ++i) {
            long long y = ((rep.image[i] - theta) % M + M) % M;
            if (inB[y]) {
                phi.x.push_back(cfg.A[i]);
                phi.y.push_back(Point{rep.image[i]});
            }
        }
        ++rep.safe_translates;
        if (!check_freiman(phi, 2).verified) {
            rep.safe = false;
            break;
        }
    }
    return rep;
}

SchoenSisaskReport schoen_sisask_search(const GroupSpec& G, const Subset& X, const Subset& Y, const BohrSet& B,
                                        const RealFn& f, double eps, int max_rounds) {
    if (X.empty() || Y.empty()) fail_pre("schoen_sisask", "sets must be nonempty");
    if (!(B.G == G) || !(f.G == G)) fail_pre("schoen_sisask", "inputs live on different groups");
    SchoenSisaskReport rep;
    RealFn XY = convolve(indicator_density(G, X), indicator_density(G, Y));
    RealFn g = crosscorr(XY, f);
    rep.base_value = g[0];
    Subset Bm = bohr_members(B);
    auto sumset = [&](const Subset& S, const Subset& T) {
        std::vector<char> hit(G.order(), 0);
        for (int s : S)
            for (int t : T) hit[G.add(s, t)] = 1;
        Subset out;
        for (int x = 0; x < G.order(); ++x)
            if (hit[x]) out.push_back(x);
        return out;
    };
    Subset YB = sumset(Y, Bm);
    Subset XYB = sumset(X, YB);
    rep.d = std::log2(static_cast<double>(YB.size()) / Y.size());
    rep.s = std::log2(static_cast<double>(XYB.size()) / X.size());

    BohrSet cur = B;
    Subset mem = Bm;
    auto deviation = [&](int b) { return std::abs(g[b] - rep.base_value); };
    for (;;) {
        Subset viol;
        for (int b : mem)
            if (deviation(b) > eps) viol.push_back(b);
        if (viol.empty()) {
            rep.certified = true;
            break;
        }
        if (rep.rounds >= max_rounds) {
            rep.note = "round limit reached with violating translates left";
            break;
        }
        ++rep.rounds;
        // frequency whose constraint removes the most violators per lost good member
        int best = -1;
        double best_score = 0;
        std::vector<char> isviol(G.order(), 0);
        for (int b : viol) isviol[b] = 1;
        for (int gam = 1; gam < G.order(); ++gam) {
            if (std::find(cur.freqs.begin(), cur.freqs.end(), gam) != cur.freqs.end()) continue;
            long long rv = 0, rg = 0;
            for (int b : mem)
                if (char_dist(G, gam, b) > cur.rho + 1e-12) (isviol[b] ? rv : rg) += 1;
            if (rv == 0) continue;
            double score = static_cast<double>(rv) / (1.0 + static_cast<double>(rg));
            if (score > best_score) {
                best_score = score;
                best = gam;
            }
        }
        if (best < 0) {
            cur.rho /= 2;
        } else {
            cur.freqs.push_back(best);
        }
        mem = bohr_members(cur);
    }
    rep.Bprime = cur;
    rep.members = mem;
    for (int b : mem) rep.max_deviation = std::max(rep.max_deviation, deviation(b));
    const double r = std::max(1, B.rank());
    const double rp = std::max(1, cur.rank());
    const double le = std::log2(1 / std::max(eps, 1e-300));
    rep.rank_shape = B.rank() + rep.d * std::pow(rep.s, 3) / (eps * eps) + rep.d * rep.s * le * le / (eps * eps);
    rep.radius_shape = B.rho * eps * std::pow(2.0, -rep.s / 2) / (r * r * rp);
    return rep;
}

namespace {

double pick_regular(const BohrSet& B, double lo, double hi, bool& found) {
    found = false;
    for (int j = 0; j <= 64; ++j) {
        double d = lo + (hi - lo) * j / 64.0;
        if (is_regular(dilate(B, d)).regular) {
            found = true;
            return d;
        }
    }
    return hi;
}

RealFn pointwise_pow(const RealFn& f, int k) {
    RealFn g = f;
    for (double& x : g.v) x = std::pow(x, k);
    return g;
}

DensityFn uniform_on(const GroupSpec& G, const std::vector<long long>& pts) {
    std::set<int> s;
    for (long long p : pts) s.insert(static_cast<int>(p));
    return indicator_density(G, Subset(s.begin(), s.end()));
}

}  // namespace

SvrReport svr_local(const GroupSpec& G, const Subset& A, const BohrSet& B, int k, double eps0,
                    const SearchBudget& budget) {
    if (G.rank() != 1) fail_pre("svr_local", "group must be cyclic");
    if (!(B.G == G)) fail_pre("svr_local", "Bohr set lives on a different group");
    if (A.empty()) fail_pre("svr_local", "empty set");
    if (eps0 < 0 || eps0 > 1) fail_pre("svr_local", "eps0 must lie in [0,1]");
    if (k < 1) fail_pre("svr_local", "k must be positive");
    SvrReport rep;
    const int N = G.order();
    const int r = std::max(1, B.rank());
    auto push = [&](const std::string& id, double value, double thr, bool holds, const std::string& note = "") {
        rep.stages.push_back(StageRecord{id, value, thr, holds, note});
        if (!holds && rep.failed_stage.empty()) rep.failed_stage = id;
        return holds;
    };
    Subset Bm = bohr_members(B);
    QFn Fq = self_crosscorr_q(G, A);
    RealFn F = Fq.to_real();
    DensityFn Bd = indicator_density(G, Bm);
    double hyp = weighted_knorm(F, k, crosscorr(Bd, Bd));
    if (hyp < 1 + eps0 - 1e-12) fail_pre("svr_local", "hypothesis ||A*A||_{k,B*B} >= 1 + eps0 fails");
    push("hypothesis", hyp, 1 + eps0, true);

    bool found = false;
    const double delta0 = eps0 / (100.0 * r);
    rep.delta = pick_regular(B, delta0 / 2, delta0, found);
    push("delta", rep.delta, delta0, true, found ? "" : "no regular grid dilate; using delta0");
    BohrSet Bdel = dilate(B, rep.delta), Bwide = dilate(B, 1 + rep.delta);
    Subset Mdel = bohr_members(Bdel), Mwide = bohr_members(Bwide);
    RealFn Fk = pointwise_pow(F, k);
    DensityFn Ddel = indicator_density(G, Mdel), Dwide = indicator_density(G, Mwide);
    double smooth = std::pow(inner(convolve(Dwide, Ddel), convolve(Bd, Fk)), 1.0 / k);
    if (!push("smoothing", smooth, 1 + eps0 / 2, smooth + 1e-9 >= 1 + eps0 / 2)) return rep;

    RealFn tv = crosscorr(convolve(Ddel, Bd), Fk);
    int theta = Mwide.front();
    for (int t : Mwide)
        if (tv[t] > tv[theta]) theta = t;
    rep.theta = theta;
    double tval = std::pow(tv[theta], 1.0 / k);
    if (!push("translate", tval, 1 + eps0 / 2, tval + 1e-9 >= 1 + eps0 / 2)) return rep;
    Subset C;
    for (int b : Bm) C.push_back(G.add(b, theta));
    std::sort(C.begin(), C.end());

    const double eps = eps0 / 4;
    const double target = eps / 8;
    {
        int kb = k;
        while (2 * std::pow((1 + eps) / (1 + 2 * eps), kb) > target && kb < 1 << 20) ++kb;
        rep.k_witness_bound = kb;
    }
    std::optional<LocalWitness> lw;
    std::vector<int> tries;
    for (int kp = k; kp < rep.k_witness_bound; kp *= 2) tries.push_back(kp);
    tries.push_back(rep.k_witness_bound);
    for (int kp : tries) {
        LocalWitness w;
        try {
            w = sift_local_witness(G, A, Mdel, C, k, eps, kp, budget);
        } catch (const ApcError&) {
            continue;
        }
        if (w.outcome.certified && w.outcome.achieved_ratio <= target + 1e-12) {
            lw = w;
            rep.k_witness = kp;
            break;
        }
    }
    if (!lw) {
        push("local_witness", 0, target, false, "no certified witness pair with <X*Y, f> <= eps/8");
        return rep;
    }
    rep.Y = lw->outcome.sets[0];
    rep.X = lw->outcome.sets[1];
    push("local_witness", lw->outcome.achieved_ratio, target, true);
    RealFn f(G);
    for (int x : lw->f_support) f[x] = 1;

    rep.eta = pick_regular(B, rep.delta * rep.delta / 2, rep.delta * rep.delta, found);
    push("eta", rep.eta, rep.delta * rep.delta, true, found ? "" : "no regular grid dilate; using delta^2");
    rep.ss = schoen_sisask_search(G, rep.X, rep.Y, dilate(B, rep.eta), f, eps / 8);
    if (!push("schoen_sisask", rep.ss.max_deviation, eps / 8, rep.ss.certified, rep.ss.note)) return rep;

    ProgressionReport pr = progression_in_bohr(rep.ss.Bprime);
    rep.P = pr.P;
    if (!push("progression", static_cast<double>(pr.P.volume()), pr.bound, pr.proper && pr.contained, pr.note))
        return rep;
    auto Pm = rep.P.members();
    DensityFn Pd = uniform_on(G, Pm);
    RealFn XYd = convolve(indicator_density(G, rep.X), indicator_density(G, rep.Y));
    double avg = inner(convolve(Pd, XYd), f);
    if (!push("averaged", avg, eps / 4, avg <= eps / 4 + 1e-9)) return rep;

    // translate z in X + Y with the smallest mean of f over P + z
    int z = -1;
    double zval = 2;
    for (int x = 0; x < N; ++x) {
        if (XYd[x] <= 0) continue;
        double s = 0;
        for (long long p : Pm) s += f[G.add(static_cast<int>(p), x)];
        s /= static_cast<double>(Pm.size());
        if (s < zval) {
            zval = s;
            z = x;
        }
    }
    if (!push("translate_f", zval, eps / 4, zval <= eps / 4 + 1e-9)) return rep;
    Rational chain = 0;
    for (long long p : Pm) chain += Fq.v[G.add(static_cast<int>(p), z)];
    chain /= static_cast<long>(Pm.size());
    if (!push("chain", chain.get_d(), 1 + eps / 2, chain.get_d() + 1e-9 >= 1 + eps / 2)) return rep;

    // P'' = a - (P + z) for the best a in A
    std::vector<char> inA(N, 0);
    for (int a : A) inA[a] = 1;
    int besta = A.front();
    long long bestc = -1;
    for (int a : A) {
        long long c = 0;
        for (long long p : Pm) c += inA[G.sub(a, G.add(static_cast<int>(p), z))];
        if (c > bestc) {
            bestc = c;
            besta = a;
        }
    }
    rep.Pfinal.modulus = N;
    rep.Pfinal.lengths = rep.P.lengths;
    for (long long c : rep.P.c) rep.Pfinal.c.push_back(((-c) % N + N) % N);
    rep.Pfinal.a = (((besta - z - rep.P.a) % N) + N) % N;
    rep.final_value = Rational(static_cast<long>(bestc) * static_cast<long>(N),
                              static_cast<long>(Pm.size()) * static_cast<long>(A.size()));
    rep.final_value.canonicalize();
    rep.final_double = rep.final_value.get_d();
    rep.final_proper = rep.Pfinal.proper();
    {
        std::vector<char> inB(N, 0);
        for (int b : Bm) inB[b] = 1;
        const int shift = G.sub(besta, z);
        rep.final_in_translate = true;
        for (long long y : rep.Pfinal.members())
            if (!inB[G.sub(static_cast<int>(y), shift)]) rep.final_in_translate = false;
    }
    bool ok = rep.final_double + 1e-9 >= 1 + eps0 / 8 && rep.final_proper && rep.final_in_translate;
    push("extract", rep.final_double, 1 + eps0 / 8, ok);
    const double d = std::log2(static_cast<double>(N) / A.size());
    const double rp = rep.Pfinal.rank();
    rep.size_shape = rp * std::log2(std::max(B.rho, 1e-300)) - r * std::log2(static_cast<double>(r)) -
                     d * k * r - std::pow(d * k, 5) + std::log2(static_cast<double>(N));
    rep.certified = rep.failed_stage.empty();
    return rep;
}

SpreadPipelineReport pass_to_spread(long long N, const std::vector<long long>& A, const SpreadnessConfig& sc,
                                    uint64_t seed, const SearchBudget& budget, int max_iterations,
                                    double nice_eps) {
    if (N < 1) fail_pre("pass_to_spread", "N must be positive");
    if (N > size_budget()) fail_budget("pass_to_spread", "N exceeds the size budget");
    SpreadPipelineReport rep;
    Configuration cfg = interval_configuration(N, A);
    std::map<Point, long long> origin;
    for (const Point& p : cfg.A) origin[p] = p[0];
    const double d0 = cfg.d();
    rep.iteration_bound = static_cast<int>(std::ceil(d0 / sc.eps - 1e-12));

    auto record = [&](const std::string& stage, const Configuration& c, const std::string& cert, double achieved,
                      const std::string& shape, double t0) {
        rep.trace.push_back(TraceRecord{stage, hash_points(c.N, c.A), cert, achieved, shape, now_seconds() - t0});
    };
    auto adopt = [&](const GoodIncrement& g) {
        std::map<Point, long long> next;
        for (size_t i = 0; i < g.Aprime.size(); ++i) next[g.image[i]] = origin.at(g.Aprime[i]);
        origin = std::move(next);
        cfg = make_configuration(g.Nprime, g.image);
        ++rep.iterations;
    };

    while (true) {
        if (cfg.A.size() == static_cast<size_t>(cfg.volume())) {
            rep.stop_reason = "density 1: no increment possible";
            break;
        }
        if (rep.iterations >= max_iterations) {
            rep.stop_reason = "iteration cap reached";
            break;
        }
        double t0 = now_seconds();
        MakeNiceResult mk;
        try {
            mk = make_nice(cfg, nice_eps, sc, stage_seed(seed, "make_nice/" + std::to_string(rep.iterations)));
        } catch (const ApcError& e) {
            record("make_nice", cfg, std::string("error: ") + e.what(), 0, "", t0);
            rep.stop_reason = std::string("no increment found: ") + e.what();
            break;
        }
        if (mk.branch == NiceBranch::Increment) {
            record("make_nice/increment", cfg, mk.increment_check.verified ? "good increment verified" : mk.note,
                   mk.density_ratio, "density >= (1+eps/2) mu", t0);
            if (mk.increment_check.verified) {
                adopt(mk.increment);
                continue;
            }
            rep.stop_reason = "no increment found: sub-box increment fails the good-increment test";
            break;
        }
        if (mk.branch == NiceBranch::ManyAPs) {
            record("make_nice/many_aps", cfg, mk.many_ok ? "3-AP count above threshold" : "count below threshold",
                   static_cast<double>(mk.count.total), "r^-O(r) mu |A|^2", t0);
            rep.stop_reason = "many 3-progressions";
            break;
        }
        record("make_nice/nice", cfg, mk.certified ? "niceness verified" : mk.note, mk.density_ratio,
               "density >= (1 - 5 eps) mu", t0);
        if (!mk.certified) {
            rep.stop_reason = "no increment found: " + mk.note;
            break;
        }
        t0 = now_seconds();
        EmbedReport em;
        try {
            em = embed_nice(mk.nice, mk.delta);
        } catch (const ApcError& e) {
            record("embed_nice", mk.nice, std::string("error: ") + e.what(), 0, "", t0);
            rep.stop_reason = std::string("no increment found: ") + e.what();
            break;
        }
        record("embed_nice", mk.nice, em.margin_ok && em.safe ? "margin and safety verified" : "verification failed",
               em.margin, "||A*A||_{k,B*B} >= 1 + 1/4", t0);
        if (!em.margin_ok || !em.safe) {
            rep.stop_reason = "no increment found: embedding checks fail";
            break;
        }
        t0 = now_seconds();
        Subset img = em.image;
        std::sort(img.begin(), img.end());
        SvrReport sv;
        try {
            sv = svr_local(em.G, img, em.B, em.k, 0.25, budget);
        } catch (const ApcError& e) {
            record("svr_local", mk.nice, std::string("error: ") + e.what(), 0, "", t0);
            rep.stop_reason = std::string("no increment found: ") + e.what();
            break;
        }
        record("svr_local", mk.nice, sv.certified ? "progression certified" : "failed at " + sv.failed_stage,
               sv.final_double, "<P'', A> >= 1 + eps0/8", t0);
        if (!sv.certified) {
            rep.stop_reason = "no increment found: svr_local failed at " + sv.failed_stage;
            break;
        }
        // label the progression and pull back through the embedding
        std::map<long long, Point> label;
        {
            const int rr = sv.Pfinal.rank();
            std::vector<long long> x(rr, 1);
            for (long long y : sv.Pfinal.members()) {
                label[y] = x;
                int i = rr - 1;
                while (i >= 0 && x[i] == sv.Pfinal.lengths[i]) x[i--] = 1;
                if (i >= 0) ++x[i];
            }
        }
        GoodIncrement g;
        g.Nprime = sv.Pfinal.lengths;
        for (size_t i = 0; i < mk.nice.A.size(); ++i) {
            auto it = label.find(em.image[i]);
            if (it == label.end()) continue;
            g.Aprime.push_back(mk.source[i]);
            g.image.push_back(it->second);
        }
        t0 = now_seconds();
        IncrementCheck chk = is_good_increment(cfg, g, sc);
        record("good_increment", cfg, chk.verified ? "good increment verified" : "good-increment test fails",
               chk.density_after / std::max(chk.density_before, 1e-300), "r' <= r + K d^c", t0);
        if (!chk.verified) {
            rep.stop_reason = "no increment found: composed map fails the good-increment test";
            break;
        }
        adopt(g);
    }
    rep.final_cfg = cfg;
    FreimanMap phi;
    phi.dom.moduli = {0};
    phi.cod.moduli.assign(cfg.rank(), 0);
    for (const Point& p : cfg.A) {
        rep.Aprime.push_back(origin.at(p));
        phi.x.push_back(Point{origin.at(p)});
        phi.y.push_back(p);
    }
    rep.composition_hom = check_freiman(phi, 2).verified;
    std::sort(rep.Aprime.begin(), rep.Aprime.end());
    rep.within_bound = rep.iterations <= rep.iteration_bound;
    return rep;
}

}  // namespace apc
