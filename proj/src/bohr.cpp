#include "apc/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace apc {

namespace {

constexpr double kEdge = 1e-12;

// max over gamma of |e_gamma(x) - 1|; x is in B_s iff this is <= s rho.
std::vector<double> radius_profile(const BohrSet& B) {
    const GroupSpec& G = B.G;
    std::vector<double> D(G.order(), 0.0);
    for (int x = 0; x < G.order(); ++x)
        for (int g : B.freqs) D[x] = std::max(D[x], char_dist(G, g, x));
    return D;
}

long long count_at_most(const std::vector<double>& sorted, double r) {
    return std::upper_bound(sorted.begin(), sorted.end(), r + kEdge) - sorted.begin();
}
long long count_below(const std::vector<double>& sorted, double r) {
    return std::lower_bound(sorted.begin(), sorted.end(), r - kEdge) - sorted.begin();
}

void check_bohr(const BohrSet& B, const std::string& stage) {
    if (B.rho < 0 || B.rho > 2) fail_pre(stage, "radius must lie in [0,2]");
    for (int g : B.freqs)
        if (g < 0 || g >= B.G.order()) fail_pre(stage, "frequency index out of range");
}

long long mod(long long a, long long n) { return n > 0 ? ((a % n) + n) % n : a; }

}  // namespace

Subset bohr_members(const BohrSet& B) {
    check_bohr(B, "bohr_members");
    if (B.G.order() > size_budget()) fail_budget("bohr_members", "group order exceeds budget");
    Subset out;
    for (int x = 0; x < B.G.order(); ++x) {
        bool in = true;
        for (int g : B.freqs)
            if (char_dist(B.G, g, x) > B.rho + kEdge) {
                in = false;
                break;
            }
        if (in) out.push_back(x);
    }
    return out;
}

BohrSet dilate(const BohrSet& B, double delta) {
    if (delta < 0) fail_pre("dilate", "delta must be nonnegative");
    BohrSet r = B;
    r.rho = std::min(2.0, B.rho * delta);
    return r;
}

namespace {

bool sum_within(const GroupSpec& G, const Subset& X, const Subset& Y, const Subset& Z) {
    std::vector<char> in(G.order(), 0);
    for (int z : Z) in[z] = 1;
    for (int x : X)
        for (int y : Y)
            if (!in[G.add(x, y)]) return false;
    return true;
}

// X + Y within Z in Z_N: for each x, Y must avoid the complement of Z - x.
// Words of the doubled complement give the window at offset x directly.
bool cyclic_sum_within(int N, const Subset& X, const Subset& Y, const Subset& Z) {
    const int W = (N + 63) / 64;
    std::vector<uint64_t> ybits(W, 0), out(2 * W + 1, 0);
    for (int y : Y) ybits[y >> 6] |= 1ULL << (y & 63);
    std::vector<char> in(N, 0);
    for (int z : Z) in[z] = 1;
    for (int i = 0; i < 2 * N; ++i)
        if (!in[i % N]) out[i >> 6] |= 1ULL << (i & 63);
    for (int x : X) {
        const int w0 = x >> 6, sh = x & 63;
        for (int j = 0; j < W; ++j) {
            uint64_t win = out[w0 + j] >> sh;
            if (sh) win |= out[w0 + j + 1] << (64 - sh);
            if (ybits[j] & win) return false;
        }
    }
    return true;
}

}  // namespace

SizeEstimates size_estimates(const BohrSet& B, const std::vector<double>& deltas) {
    check_bohr(B, "size_estimates");
    const GroupSpec& G = B.G;
    const int r = B.rank();
    SizeEstimates s;
    if (G.order() > size_budget()) fail_budget("size_estimates", "group order exceeds budget");
    // one profile serves every dilate: x is in B_s iff D[x] <= min(2, s rho)
    const std::vector<double> D = radius_profile(B);
    auto members_at = [&](double s_) {
        const double rad = dilate(B, s_).rho + kEdge;
        Subset out;
        for (int x = 0; x < G.order(); ++x)
            if (D[x] <= rad) out.push_back(x);
        return out;
    };
    Subset mem = members_at(1);
    s.size = static_cast<long long>(mem.size());
    s.lower = std::pow(B.rho / (2 * M_PI), r) * G.order();
    s.lower_holds = s.size + kTol >= s.lower;
    s.size2 = static_cast<long long>(members_at(2).size());
    s.doubling = std::pow(6.0, r) * s.size;
    s.doubling_holds = s.size2 <= s.doubling + kTol;
    s.all_hold = s.lower_holds && s.doubling_holds;
    for (double d : deltas) {
        DilateCheck c;
        c.delta = d;
        Subset Bd = members_at(d);
        c.size = static_cast<long long>(Bd.size());
        c.bound = std::pow(d / 2, r) * s.size;
        c.holds = c.size + kTol >= c.bound;
        Subset Bbig = members_at(1 + d);
        c.sumset_inclusion = G.rank() == 1 ? cyclic_sum_within(G.order(), mem, Bd, Bbig)
                                           : sum_within(G, mem, Bd, Bbig);
        s.all_hold = s.all_hold && c.holds && c.sumset_inclusion;
        s.dilates.push_back(c);
    }
    return s;
}

RegularityReport is_regular(const BohrSet& B, int grid_steps) {
    check_bohr(B, "is_regular");
    if (grid_steps < 16) fail_pre("is_regular", "grid_steps must be at least 16");
    RegularityReport rep;
    const int r = B.rank();
    if (r == 0) {
        rep.points = 1;
        return rep;
    }
    std::vector<double> D = radius_profile(B);
    std::sort(D.begin(), D.end());
    const double rho = B.rho;
    const double size = static_cast<double>(count_at_most(D, rho));
    const double top = 1.0 / (12.0 * r);

    auto upper = [&](double d, long long cnt) {
        double excess = cnt / size - (1 + 12 * r * d);
        ++rep.points;
        rep.worst_upper = std::max(rep.worst_upper, excess);
        if (excess > kEdge && rep.regular) {
            rep.regular = false;
            rep.failing_delta = d;
            rep.failing_side = "upper";
        }
    };
    auto lower = [&](double d, long long cnt) {
        double deficit = (1 - 12 * r * d) - cnt / size;
        ++rep.points;
        rep.worst_lower = std::max(rep.worst_lower, deficit);
        if (deficit > kEdge && rep.regular) {
            rep.regular = false;
            rep.failing_delta = d;
            rep.failing_side = "lower";
        }
    };
    for (int i = 0; i <= grid_steps; ++i) {
        double d = top * i / grid_steps;
        upper(d, count_at_most(D, rho * (1 + d)));
        lower(d, count_at_most(D, rho * (1 - d)));
    }
    if (rho > 0) {
        // The count jumps at each distinct profile value; the upper ratio is worst at the jump,
        // the lower one just past it.
        for (size_t i = 0; i < D.size(); ++i) {
            if (i > 0 && D[i] - D[i - 1] <= kEdge) continue;
            double du = D[i] / rho - 1;
            if (du > 0 && du <= top) upper(du, count_at_most(D, D[i]));
            double dl = 1 - D[i] / rho;
            if (dl >= 0 && dl < top) lower(dl, count_below(D, D[i]));
        }
    }
    return rep;
}

RegularizeReport regularize(const BohrSet& B, int grid_steps) {
    RegularizeReport rep;
    rep.grid_steps = grid_steps;
    for (int j = 0; j <= grid_steps; ++j) {
        double d = 0.5 + 0.5 * j / grid_steps;
        if (is_regular(dilate(B, d), grid_steps).regular) {
            rep.delta_star = d;
            return rep;
        }
        ++rep.rejected;
    }
    rep.note = "no grid point in [1/2,1] gives a regular dilate; the existence claim is for continuous delta";
    return rep;
}

IntervalBohr interval_as_bohr(int N, double rho) {
    if (N < 2) fail_pre("interval_as_bohr", "N must be at least 2");
    if (rho < 0 || rho > 1) fail_pre("interval_as_bohr", "rho must lie in [0,1]");
    IntervalBohr out;
    GroupSpec G = make_group({N});
    out.B = BohrSet{G, {1}, rho};
    Subset mem = bohr_members(out.B);
    for (int x : mem) out.m = std::max(out.m, std::min(x, N - x));
    std::set<int> expect;
    for (int x = -out.m; x <= out.m; ++x) expect.insert(((x % N) + N) % N);
    out.members_match = std::set<int>(mem.begin(), mem.end()) == expect;
    out.lo = rho / (2 * M_PI);
    out.hi = rho / 4;
    out.ratio = static_cast<double>(out.m) / N;
    out.sandwich_holds = out.ratio + kEdge >= out.lo && out.ratio <= out.hi + kEdge;
    return out;
}

long long Progression::volume() const {
    long long v = 1;
    for (long long L : lengths) v *= L;
    return v;
}

std::vector<long long> Progression::members() const {
    std::vector<long long> out;
    const int r = rank();
    if (volume() > search_budget()) fail_budget("progression", "progression volume exceeds search budget");
    std::vector<long long> x(r, 1);
    while (true) {
        long long s = a;
        for (int i = 0; i < r; ++i) s += c[i] * x[i];
        out.push_back(mod(s, modulus));
        int i = r - 1;
        while (i >= 0 && x[i] == lengths[i]) x[i--] = 1;
        if (i < 0) break;
        ++x[i];
    }
    return out;
}

bool Progression::proper() const {
    auto m = members();
    std::sort(m.begin(), m.end());
    return std::unique(m.begin(), m.end()) == m.end();
}

ProgressionReport progression_in_bohr(const BohrSet& B) {
    check_bohr(B, "progression_in_bohr");
    if (B.G.rank() != 1) fail_pre("progression_in_bohr", "group must be cyclic");
    const int N = B.G.order();
    const int r = B.rank();
    ProgressionReport rep;
    rep.P.modulus = N;
    if (r == 0) {
        rep.P.a = 0;
        rep.P.c = {1};
        rep.P.lengths = {N};
        rep.method = "whole group";
    } else {
        std::vector<char> inB(N, 0);
        for (int x : bohr_members(B)) inB[x] = 1;
        std::vector<char> used(N, 0);
        std::vector<int> box{0};
        used[0] = 1;
        std::vector<long long> gens, half;
        for (int g = 0; g < r; ++g) {
            long long bestc = 1, bestL = -1;
            for (int c = 1; c <= N / 2; ++c) {
                if (!inB[c]) continue;
                std::vector<int> marked;
                long long L = 0;
                while (true) {
                    long long step = static_cast<long long>(c) * (L + 1);
                    size_t before = marked.size();
                    bool ok = true;
                    for (int b : box) {
                        for (long long y : {mod(b + step, N), mod(b - step, N)}) {
                            if (!inB[y] || used[y]) {
                                ok = false;
                                break;
                            }
                            used[y] = 1;
                            marked.push_back(static_cast<int>(y));
                        }
                        if (!ok) break;
                    }
                    if (!ok) {
                        for (size_t i = before; i < marked.size(); ++i) used[marked[i]] = 0;
                        marked.resize(before);
                        break;
                    }
                    ++L;
                }
                for (int y : marked) used[y] = 0;
                if (L > bestL) {
                    bestL = L;
                    bestc = c;
                }
            }
            if (bestL < 0) bestL = 0;
            std::vector<int> grown;
            for (int b : box)
                for (long long x = -bestL; x <= bestL; ++x) {
                    int y = static_cast<int>(mod(b + bestc * x, N));
                    grown.push_back(y);
                    used[y] = 1;
                }
            box = grown;
            gens.push_back(bestc);
            half.push_back(bestL);
        }
        rep.P.a = 0;
        for (int i = 0; i < r; ++i) {
            rep.P.c.push_back(gens[i]);
            rep.P.lengths.push_back(2 * half[i] + 1);
            rep.P.a -= gens[i] * (half[i] + 1);
        }
        rep.P.a = mod(rep.P.a, N);
        rep.method = r == 1 ? "interval" : "greedy generator search";
    }
    auto mem = rep.P.members();
    std::set<long long> distinct(mem.begin(), mem.end());
    rep.proper = static_cast<long long>(distinct.size()) == rep.P.volume();
    Subset Bm = bohr_members(B);
    rep.contained = std::all_of(mem.begin(), mem.end(),
                                [&](long long y) { return std::binary_search(Bm.begin(), Bm.end(), static_cast<int>(y)); });
    const int rr = std::max(1, r);
    rep.bound = r == 0 ? N : std::pow(B.rho / (2 * M_PI * rr), rr) * N;
    rep.meets_bound = rep.P.volume() + kTol >= rep.bound;
    if (!rep.meets_bound) rep.note = "found progression is smaller than the guaranteed size";
    return rep;
}

Point Space::reduce(Point a) const {
    for (size_t i = 0; i < a.size(); ++i) a[i] = mod(a[i], moduli[i]);
    return a;
}
Point Space::add(const Point& a, const Point& b) const {
    Point r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i] + b[i], moduli[i]);
    return r;
}
Point Space::sub(const Point& a, const Point& b) const {
    Point r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i] - b[i], moduli[i]);
    return r;
}

FreimanCert check_freiman(const FreimanMap& phi, int t, long long budget, uint64_t seed) {
    if (t < 1) fail_pre("check_freiman", "order t must be positive");
    if (phi.x.size() != phi.y.size()) fail_pre("check_freiman", "map table is ragged");
    {
        std::set<Point> dom(phi.x.begin(), phi.x.end());
        if (dom.size() != phi.x.size()) fail_pre("check_freiman", "map lists a domain point twice");
    }
    if (budget < 0) budget = search_budget();
    FreimanCert cert;
    cert.t = t;
    const int n = static_cast<int>(phi.x.size());
    if (n == 0) {
        cert.verified = true;
        return cert;
    }
    long double multisets = 1;
    for (int i = 1; i <= t; ++i) multisets = multisets * (n + i - 1) / i;
    cert.exhaustive = multisets <= static_cast<long double>(budget);

    std::map<Point, std::pair<Point, std::vector<int>>> seen;
    const Point zx = phi.dom.reduce(Point(phi.dom.moduli.size(), 0));
    const Point zy = phi.cod.reduce(Point(phi.cod.moduli.size(), 0));
    auto visit = [&](const std::vector<int>& idx) {
        Point sx = zx, sy = zy;
        for (int i : idx) {
            sx = phi.dom.add(sx, phi.x[i]);
            sy = phi.cod.add(sy, phi.y[i]);
        }
        ++cert.tuples;
        auto it = seen.find(sy);
        if (it == seen.end()) {
            seen.emplace(std::move(sy), std::make_pair(std::move(sx), idx));
            return true;
        }
        if (it->second.first != sx) {
            cert.counterexample = std::make_pair(it->second.second, idx);
            return false;
        }
        return true;
    };

    if (cert.exhaustive) {
        std::vector<int> idx(t, 0);
        while (true) {
            if (!visit(idx)) break;
            int i = t - 1;
            while (i >= 0 && idx[i] == n - 1) --i;
            if (i < 0) {
                cert.verified = true;
                break;
            }
            ++idx[i];
            for (int j = i + 1; j < t; ++j) idx[j] = idx[i];
        }
    } else {
        Rng rng(seed);
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::vector<int> idx(t);
        for (long long s = 0; s < budget; ++s) {
            for (int& v : idx) v = pick(rng);
            std::sort(idx.begin(), idx.end());
            if (!visit(idx)) break;
        }
        if (!cert.counterexample) cert.note = "sampled tuples only; not a certificate";
    }
    return cert;
}

FreimanMap progression_label_map(const Progression& P) {
    FreimanMap phi;
    phi.dom.moduli = {P.modulus};
    phi.cod.moduli.assign(P.rank(), 0);
    const int r = P.rank();
    std::vector<long long> x(r, 1);
    auto mem = P.members();
    for (long long v : mem) {
        phi.x.push_back({v});
        phi.y.push_back(x);
        int i = r - 1;
        while (i >= 0 && x[i] == P.lengths[i]) x[i--] = 1;
        if (i >= 0) ++x[i];
    }
    return phi;
}

FreimanMap mod_map(const std::vector<Point>& X, const std::vector<long long>& N) {
    FreimanMap phi;
    phi.dom.moduli.assign(N.size(), 0);
    phi.cod.moduli = N;
    for (const Point& x : X) {
        if (x.size() != N.size()) fail_pre("mod_map", "point dimension mismatch");
        phi.x.push_back(x);
        phi.y.push_back(phi.cod.reduce(x));
    }
    return phi;
}

SmoothingReport smoothing_check(const Space& sp, const std::vector<Point>& A, const std::vector<Point>& B,
                                const std::vector<Point>& S, const std::vector<Rational>& nu,
                                const std::vector<std::pair<Point, double>>& f) {
    if (A.empty() || B.empty() || S.empty()) fail_pre("smoothing_check", "sets must be nonempty");
    std::set<Point> Sset;
    for (const Point& s : S) Sset.insert(sp.reduce(s));
    SmoothingReport rep;
    rep.contains_difference_set = true;
    for (const Point& a : A)
        for (const Point& b : B)
            if (!Sset.count(sp.sub(a, b))) rep.contains_difference_set = false;
    if (!rep.contains_difference_set) fail_pre("smoothing_check", "S does not contain A - B");

    std::vector<Rational> w = nu;
    if (w.empty()) w.assign(B.size(), Rational(1, static_cast<long>(B.size())));
    if (w.size() != B.size()) fail_pre("smoothing_check", "distribution length differs from |B|");
    Rational total = 0;
    for (const Rational& q : w) {
        if (q < 0) fail_pre("smoothing_check", "distribution has a negative weight");
        total += q;
    }
    if (total != 1) fail_pre("smoothing_check", "distribution does not sum to 1");

    const Rational inv(1, static_cast<long>(Sset.size()));
    auto smoothed = [&](const Point& x) {
        Rational v = 0;
        for (size_t j = 0; j < B.size(); ++j)
            if (Sset.count(sp.sub(x, B[j]))) v += w[j];
        return Rational(v * inv);
    };
    rep.identity_holds = true;
    for (const Point& a : A)
        if (smoothed(sp.reduce(a)) != inv) rep.identity_holds = false;
    rep.value_exact = inv.get_str();

    if (!f.empty()) {
        std::set<Point> Aset;
        for (const Point& a : A) Aset.insert(sp.reduce(a));
        rep.delta = static_cast<double>(Sset.size()) / Aset.size() - 1;
        for (const auto& [p, v] : f) {
            if (v < 0) fail_pre("smoothing_check", "test function must be nonnegative");
            Point q = sp.reduce(p);
            rep.lhs += smoothed(q).get_d() * v;
            if (Aset.count(q)) rep.rhs += v / Aset.size();
        }
        rep.rhs /= 1 + rep.delta;
        rep.one_sided_holds = rep.lhs + kTol >= rep.rhs;
    }
    return rep;
}

BohrSmoothingReport bohr_smoothing_check(const BohrSet& B, double delta, const RealFn& f) {
    if (!(f.G == B.G)) fail_pre("bohr_smoothing_check", "function lives on a different group");
    const GroupSpec& G = B.G;
    Subset base = bohr_members(B), wide = bohr_members(dilate(B, 1 + delta)), thin = bohr_members(dilate(B, delta));
    BohrSmoothingReport rep;
    std::vector<double> mass(G.order(), 0.0);
    const double w = 1.0 / (static_cast<double>(wide.size()) * thin.size());
    for (int a : wide)
        for (int b : thin) mass[G.add(a, b)] += w;
    for (int x = 0; x < G.order(); ++x) rep.lhs += mass[x] * f[x];
    for (int x : base) rep.rhs += f[x];
    rep.rhs *= (1 - 12 * delta * B.rank()) / base.size();
    rep.holds = rep.lhs + kTol >= rep.rhs;
    rep.regular = is_regular(B).regular;
    return rep;
}

SafeSpec make_safe_spec(const std::vector<long long>& N, double delta) {
    if (!(delta > 0 && delta <= 0.5)) fail_pre("safe_spec", "delta must lie in (0,1/2]");
    if (N.empty()) fail_pre("safe_spec", "need at least one length");
    SafeSpec s;
    s.N = N;
    s.delta = delta;
    double frac_u = 1;
    for (long long n : N) {
        if (n < 1) fail_pre("safe_spec", "lengths must be positive");
        const double a = 1, b = static_cast<double>(n), w = b - a;
        s.U.emplace_back(static_cast<long long>(std::ceil(a + 2 * delta * w - kEdge)), n);
        s.M.emplace_back(static_cast<long long>(std::ceil(a + w / 2 + 1 - kEdge)),
                         static_cast<long long>(std::floor(a + (0.5 + delta) * w + kEdge)));
        s.v.push_back(static_cast<long long>(std::floor((0.5 + delta / 2) * n)));
        s.m.push_back(static_cast<long long>(std::floor(delta * n / 3)));
        frac_u *= static_cast<double>(std::max(0LL, s.U.back().second - s.U.back().first + 1)) / n;
    }
    s.upper_fraction = frac_u;
    s.upper_fraction_ok = frac_u + kEdge >= 1 - 2 * delta * static_cast<double>(N.size());
    return s;
}

bool upper_middle_property(const SafeSpec& s) {
    for (size_t i = 0; i < s.N.size(); ++i) {
        const long long n = s.N[i];
        auto [ulo, uhi] = s.U[i];
        auto [mlo, mhi] = s.M[i];
        for (long long sum = 2 * ulo; sum <= 2 * uhi; ++sum)
            for (long long z = mlo; z <= mhi; ++z)
                if (mod(sum - 2 * z, n) == 0 && sum != 2 * z) return false;
    }
    return true;
}

Pullback pullback_interval(long long N, long long a, long long m) {
    if (N < 1 || m < 0) fail_pre("pullback_interval", "need N >= 1 and m >= 0");
    Pullback pb;
    std::vector<long long> pts;
    for (long long y = 1; y <= N; ++y) {
        long long off = mod(y - a, N);
        if (off == 0) off = N;
        if (off <= m) pts.push_back(y);
    }
    for (long long y : pts) {
        if (!pb.intervals.empty() && pb.intervals.back().second + 1 == y)
            pb.intervals.back().second = y;
        else
            pb.intervals.emplace_back(y, y);
    }
    const long long mm = std::min(m, N);
    if (pb.intervals.size() == 1) {
        pb.matches_observation = pb.intervals[0].second - pb.intervals[0].first + 1 == mm;
    } else if (pb.intervals.size() == 2) {
        auto [l0, b] = pb.intervals[0];
        auto [a2, r1] = pb.intervals[1];
        pb.matches_observation = l0 == 1 && r1 == N && b < m && a2 > N - m;
    }
    return pb;
}

SafeBoxReport safe_box(const std::vector<long long>& N, double delta, const std::vector<long long>& m, int t,
                       long long theta_cap, uint64_t seed) {
    if (!(delta > 0 && delta <= 0.5)) fail_pre("safe_box", "delta must lie in (0,1/2]");
    if (N.empty() || N.size() != m.size()) fail_pre("safe_box", "lengths and widths must match");
    if (t < 1 || t > 1.0 / delta + kEdge) fail_pre("safe_box", "need 1 <= t <= 1/delta");
    const size_t r = N.size();
    long long order = 1;
    for (size_t i = 0; i < r; ++i) {
        if (N[i] < 2) fail_pre("safe_box", "lengths must be at least 2");
        if (m[i] < 1 || m[i] > delta * N[i] + kEdge) fail_pre("safe_box", "need 1 <= m_i <= delta N_i");
        order *= N[i];
    }
    SafeBoxReport rep;
    for (size_t i = 0; i < r; ++i)
        rep.U.emplace_back(static_cast<long long>(std::ceil(delta * N[i] - kEdge)), N[i]);
    {
        std::vector<long long> x(r, 1);
        while (true) {
            Point p(r);
            for (size_t i = 0; i < r; ++i) p[i] = mod(x[i], N[i]);
            rep.B.push_back(p);
            int i = static_cast<int>(r) - 1;
            while (i >= 0 && x[i] == m[i]) x[i--] = 1;
            if (i < 0) break;
            ++x[i];
        }
    }
    rep.exhaustive = order <= theta_cap;
    Rng rng(seed);
    const long long count = rep.exhaustive ? order : theta_cap;
    rep.certified = true;
    for (long long k = 0; k < count; ++k) {
        Point theta(r);
        if (rep.exhaustive) {
            long long q = k;
            for (int i = static_cast<int>(r) - 1; i >= 0; --i) {
                theta[i] = q % N[i];
                q /= N[i];
            }
        } else {
            for (size_t i = 0; i < r; ++i) theta[i] = std::uniform_int_distribution<long long>(0, N[i] - 1)(rng);
        }
        std::vector<std::vector<long long>> slices(r);
        for (size_t i = 0; i < r; ++i)
            for (long long u = rep.U[i].first; u <= rep.U[i].second; ++u) {
                long long off = mod(u - theta[i], N[i]);
                if (off >= 1 && off <= m[i]) slices[i].push_back(u);
            }
        std::vector<Point> X;
        bool empty = false;
        for (auto& sl : slices) empty = empty || sl.empty();
        if (!empty) {
            std::vector<size_t> id(r, 0);
            while (true) {
                Point p(r);
                for (size_t i = 0; i < r; ++i) p[i] = slices[i][id[i]];
                X.push_back(p);
                int i = static_cast<int>(r) - 1;
                while (i >= 0 && id[i] + 1 == slices[i].size()) id[i--] = 0;
                if (i < 0) break;
                ++id[i];
            }
        }
        ++rep.thetas;
        FreimanCert c = check_freiman(mod_map(X, N), t);
        if (!c.verified) {
            rep.certified = false;
            rep.failing_theta = theta;
            rep.failure = c;
            break;
        }
    }
    return rep;
}

}  // namespace apc
