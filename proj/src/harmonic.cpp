#include "apc/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace apc {

RealFn QFn::to_real() const {
    RealFn r(G);
    for (int i = 0; i < size(); ++i) r.v[i] = v[i].get_d();
    return r;
}

static void same_group(const GroupSpec& a, const GroupSpec& b, const char* op) {
    if (!(a == b)) fail_pre(op, "group mismatch");
}

bool is_density(const RealFn& f, double tol) {
    double s = 0;
    for (double x : f.v) {
        if (x < -tol) return false;
        s += x;
    }
    return std::abs(s / f.size() - 1.0) <= tol;
}

bool is_density(const QFn& f) {
    Rational s = 0;
    for (const auto& x : f.v) {
        if (x < 0) return false;
        s += x;
    }
    return s == f.size();
}

DensityFn indicator_density(const GroupSpec& G, const Subset& A) {
    if (A.empty()) fail_pre("indicator_density", "empty set");
    RealFn f(G);
    double val = static_cast<double>(G.order()) / static_cast<double>(A.size());
    for (int a : A) f.v[a] = val;
    return f;
}

QFn indicator_density_q(const GroupSpec& G, const Subset& A) {
    if (A.empty()) fail_pre("indicator_density", "empty set");
    QFn f(G);
    Rational val(G.order(), static_cast<long>(A.size()));
    val.canonicalize();
    for (int a : A) f.v[a] = val;
    return f;
}

RealFn indicator(const GroupSpec& G, const Subset& A) {
    RealFn f(G);
    for (int a : A) f.v[a] = 1.0;
    return f;
}

DensityFn uniform_density(const GroupSpec& G) { return RealFn(G, 1.0); }

double inner(const RealFn& f, const RealFn& g) {
    same_group(f.G, g.G, "inner");
    double s = 0;
    for (int i = 0; i < f.size(); ++i) s += f.v[i] * g.v[i];
    return s / f.size();
}

Rational inner(const QFn& f, const QFn& g) {
    same_group(f.G, g.G, "inner");
    Rational s = 0;
    for (int i = 0; i < f.size(); ++i) s += f.v[i] * g.v[i];
    return s / f.size();
}

double mean(const RealFn& f) {
    double s = 0;
    for (double x : f.v) s += x;
    return s / f.size();
}

RealFn add_const(RealFn f, double c) {
    for (double& x : f.v) x += c;
    return f;
}

RealFn pointwise(const RealFn& f, const RealFn& g) {
    same_group(f.G, g.G, "pointwise");
    RealFn r(f.G);
    for (int i = 0; i < f.size(); ++i) r.v[i] = f.v[i] * g.v[i];
    return r;
}

RealFn translate(const RealFn& f, int theta) {
    RealFn r(f.G);
    for (int x = 0; x < f.size(); ++x) r.v[f.G.add(x, theta)] = f.v[x];
    return r;
}

RealFn reflect(const RealFn& f) {
    RealFn r(f.G);
    for (int x = 0; x < f.size(); ++x) r.v[f.G.neg(x)] = f.v[x];
    return r;
}

// ---------------- convolutions ----------------

RealFn convolve_naive(const RealFn& f, const RealFn& g) {
    same_group(f.G, g.G, "convolve");
    const GroupSpec& G = f.G;
    int n = G.order();
    RealFn r(G);
    for (int y = 0; y < n; ++y) {
        if (f.v[y] == 0) continue;
        for (int z = 0; z < n; ++z) r.v[G.add(y, z)] += f.v[y] * g.v[z];
    }
    for (double& x : r.v) x /= n;
    return r;
}

RealFn crosscorr_naive(const RealFn& f, const RealFn& g) {
    same_group(f.G, g.G, "crosscorr");
    const GroupSpec& G = f.G;
    int n = G.order();
    RealFn r(G);
    for (int y = 0; y < n; ++y) {
        if (f.v[y] == 0) continue;
        for (int z = 0; z < n; ++z) r.v[G.sub(z, y)] += f.v[y] * g.v[z];
    }
    for (double& x : r.v) x /= n;
    return r;
}

QFn convolve(const QFn& f, const QFn& g) {
    same_group(f.G, g.G, "convolve");
    const GroupSpec& G = f.G;
    int n = G.order();
    QFn r(G);
    for (int y = 0; y < n; ++y) {
        if (f.v[y] == 0) continue;
        for (int z = 0; z < n; ++z)
            if (g.v[z] != 0) r.v[G.add(y, z)] += f.v[y] * g.v[z];
    }
    for (auto& x : r.v) x /= n;
    return r;
}

QFn crosscorr(const QFn& f, const QFn& g) {
    same_group(f.G, g.G, "crosscorr");
    const GroupSpec& G = f.G;
    int n = G.order();
    QFn r(G);
    for (int y = 0; y < n; ++y) {
        if (f.v[y] == 0) continue;
        for (int z = 0; z < n; ++z)
            if (g.v[z] != 0) r.v[G.sub(z, y)] += f.v[y] * g.v[z];
    }
    for (auto& x : r.v) x /= n;
    return r;
}

RealFn convolve_fast(const RealFn& f, const RealFn& g) {
    same_group(f.G, g.G, "convolve");
    Spectrum a = fourier(f), b = fourier(g);
    for (size_t i = 0; i < a.c.size(); ++i) a.c[i] *= b.c[i];
    return inverse_fourier(a);
}

RealFn crosscorr_fast(const RealFn& f, const RealFn& g) {
    same_group(f.G, g.G, "crosscorr");
    Spectrum a = fourier(f), b = fourier(g);
    Spectrum out = b;
    for (int i = 0; i < f.G.order(); ++i) out.c[i] = a.c[f.G.neg(i)] * b.c[i];
    return inverse_fourier(out);
}

RealFn convolve(const RealFn& f, const RealFn& g) {
    return f.G.order() > 64 ? convolve_fast(f, g) : convolve_naive(f, g);
}
RealFn crosscorr(const RealFn& f, const RealFn& g) {
    return f.G.order() > 64 ? crosscorr_fast(f, g) : crosscorr_naive(f, g);
}

// ---------------- norms ----------------

double inf_norm(const RealFn& f) {
    double m = 0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double knorm(const RealFn& f, double k) {
    return weighted_knorm(f, k, uniform_density(f.G));
}

double weighted_knorm(const RealFn& f, double k, const DensityFn& D) {
    if (k < 1) fail_pre("knorm", "k < 1");
    same_group(f.G, D.G, "weighted_knorm");
    double M = 0;
    for (int i = 0; i < f.size(); ++i)
        if (D.v[i] > 0) M = std::max(M, std::abs(f.v[i]));
    if (M == 0) return 0;
    double s = 0;
    for (int i = 0; i < f.size(); ++i)
        if (D.v[i] > 0) s += D.v[i] * std::pow(std::abs(f.v[i]) / M, k);
    return M * std::pow(s / f.size(), 1.0 / k);
}

// ---------------- transforms ----------------

namespace {

int smallest_factor(int n) {
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return d;
    return n;
}

std::vector<cd> roots(int n, int sign) {
    std::vector<cd> w(n);
    for (int j = 0; j < n; ++j) {
        double t = sign * 2.0 * std::numbers::pi * j / n;
        w[j] = {std::cos(t), std::sin(t)};
    }
    return w;
}

void dft_naive_1d(std::vector<cd>& a, int sign) {
    int n = static_cast<int>(a.size());
    auto w = roots(n, sign);
    std::vector<cd> out(n);
    for (int k = 0; k < n; ++k) {
        cd s = 0;
        for (int j = 0; j < n; ++j) s += a[j] * w[static_cast<long long>(j) * k % n];
        out[k] = s;
    }
    a.swap(out);
}

void fft_pow2(std::vector<cd>& a, int sign) {
    int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    auto w = roots(n, sign);
    for (int len = 2; len <= n; len <<= 1) {
        int step = n / len;
        for (int i = 0; i < n; i += len)
            for (int j = 0; j < len / 2; ++j) {
                cd u = a[i + j], v = a[i + j + len / 2] * w[j * step];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
    }
}

void bluestein(std::vector<cd>& a, int sign) {
    int n = static_cast<int>(a.size());
    int M = 1;
    while (M < 2 * n - 1) M <<= 1;
    std::vector<cd> c(n);
    for (long long j = 0; j < n; ++j) {
        long long q = j * j % (2LL * n);
        double t = sign * std::numbers::pi * static_cast<double>(q) / n;
        c[j] = {std::cos(t), std::sin(t)};
    }
    std::vector<cd> x(M, 0), y(M, 0);
    for (int j = 0; j < n; ++j) x[j] = a[j] * c[j];
    y[0] = std::conj(c[0]);
    for (int t = 1; t < n; ++t) y[t] = y[M - t] = std::conj(c[t]);
    fft_pow2(x, 1);
    fft_pow2(y, 1);
    for (int i = 0; i < M; ++i) x[i] *= y[i];
    fft_pow2(x, -1);
    for (int k = 0; k < n; ++k) a[k] = c[k] * x[k] / static_cast<double>(M);
}

}  // namespace

void dft_1d(std::vector<cd>& a, int sign) {
    int n = static_cast<int>(a.size());
    if (n <= 1) return;
    if ((n & (n - 1)) == 0) {
        fft_pow2(a, sign);
        return;
    }
    int p = smallest_factor(n);
    if (p == n) {
        if (n <= 32)
            dft_naive_1d(a, sign);
        else
            bluestein(a, sign);
        return;
    }
    int m = n / p;
    std::vector<std::vector<cd>> sub(p, std::vector<cd>(m));
    for (int r = 0; r < p; ++r)
        for (int j = 0; j < m; ++j) sub[r][j] = a[j * p + r];
    for (auto& s : sub) dft_1d(s, sign);
    auto w = roots(n, sign);
    for (int k = 0; k < n; ++k) {
        cd s = 0;
        for (int r = 0; r < p; ++r) s += w[static_cast<long long>(r) * k % n] * sub[r][k % m];
        a[k] = s;
    }
}

void dft_nd(const GroupSpec& G, std::vector<cd>& a, int sign) {
    int n = G.order();
    int stride = n;
    for (int ax = 0; ax < G.rank(); ++ax) {
        int len = G.moduli()[ax];
        stride /= len;
        int lines = n / len;
#pragma omp parallel for schedule(static)
        for (int l = 0; l < lines; ++l) {
            int hi = l / stride, lo = l % stride;
            int base = hi * stride * len + lo;
            std::vector<cd> buf(len);
            for (int j = 0; j < len; ++j) buf[j] = a[base + j * stride];
            dft_1d(buf, sign);
            for (int j = 0; j < len; ++j) a[base + j * stride] = buf[j];
        }
    }
}

Spectrum fourier(const RealFn& f) {
    Spectrum S{f.G, std::vector<cd>(f.v.begin(), f.v.end())};
    dft_nd(f.G, S.c, +1);
    double n = f.G.order();
    for (auto& z : S.c) z /= n;
    return S;
}

Spectrum fourier_naive(const RealFn& f) {
    const GroupSpec& G = f.G;
    int n = G.order();
    Spectrum S{G, std::vector<cd>(n)};
    for (int a = 0; a < n; ++a) {
        cd s = 0;
        for (int y = 0; y < n; ++y)
            if (f.v[y] != 0) s += f.v[y] * character_value(G, a, y);
        S.c[a] = s / static_cast<double>(n);
    }
    return S;
}

RealFn inverse_fourier(const Spectrum& S) {
    std::vector<cd> a = S.c;
    dft_nd(S.G, a, -1);
    RealFn r(S.G);
    for (int i = 0; i < S.G.order(); ++i) r.v[i] = a[i].real();
    return r;
}

// ---------------- representation counts ----------------

RepCount rep_counts(const GroupSpec& G, const Subset& A, const Subset& B, RepKind kind) {
    if (A.empty() || B.empty()) fail_pre("rep_counts", "empty set");
    RepCount R{kind, A, B, std::vector<long long>(G.order(), 0)};
    for (int a : A)
        for (int b : B) ++R.counts[kind == RepKind::Sum ? G.add(a, b) : G.sub(a, b)];
    return R;
}

QFn self_crosscorr_q(const GroupSpec& G, const Subset& A) {
    RepCount R = rep_counts(G, A, A, RepKind::Difference);
    QFn f(G);
    Rational s(G.order(), static_cast<long>(A.size() * A.size()));
    s.canonicalize();
    for (int x = 0; x < G.order(); ++x) f.v[x] = s * static_cast<long>(R.counts[x]);
    return f;
}

// ---------------- compressions / divergence ----------------

DensityFn compress(const DensityFn& D, int k) {
    if (k < 1) fail_pre("compress", "k < 1");
    double M = inf_norm(D);
    if (M == 0) fail_pre("compress", "zero function");
    RealFn r(D.G);
    double s = 0;
    for (int i = 0; i < D.size(); ++i) s += r.v[i] = std::pow(D.v[i] / M, k);
    for (double& x : r.v) x *= D.size() / s;
    return r;
}

QFn compress(const QFn& D, int k) {
    if (k < 1) fail_pre("compress", "k < 1");
    QFn r(D.G);
    Rational s = 0;
    for (int i = 0; i < D.size(); ++i) {
        mpq_class p = 1;
        for (int j = 0; j < k; ++j) p *= D.v[i];
        r.v[i] = p;
        s += p;
    }
    if (s == 0) fail_pre("compress", "zero function");
    for (auto& x : r.v) x = x * D.size() / s;
    return r;
}

double kdivergence(const std::vector<double>& pi, const std::vector<double>& pi2, double k) {
    if (pi.size() != pi2.size()) fail_pre("kdivergence", "length mismatch");
    if (k < 1) fail_pre("kdivergence", "k < 1");
    double num = 0, den = 0;
    for (size_t i = 0; i < pi.size(); ++i) {
        num += std::pow(std::abs(pi[i] - pi2[i]), k);
        den += std::pow(pi2[i], k);
    }
    if (den == 0) fail_pre("kdivergence", "reference distribution is zero");
    return std::pow(num / den, 1.0 / k);
}

Rational kdivergence_pow(const std::vector<Rational>& pi, const std::vector<Rational>& pi2, int k) {
    if (pi.size() != pi2.size()) fail_pre("kdivergence", "length mismatch");
    Rational num = 0, den = 0;
    for (size_t i = 0; i < pi.size(); ++i) {
        Rational d = abs(pi[i] - pi2[i]), a = 1, b = 1;
        for (int j = 0; j < k; ++j) {
            a *= d;
            b *= pi2[i];
        }
        num += a;
        den += b;
    }
    if (den == 0) fail_pre("kdivergence", "reference distribution is zero");
    return num / den;
}

std::vector<double> to_distribution(const DensityFn& f) {
    std::vector<double> pi(f.v);
    for (double& x : pi) x /= f.size();
    return pi;
}

DensityFn from_distribution(const GroupSpec& G, const std::vector<double>& pi) {
    RealFn f(G);
    for (int i = 0; i < G.order(); ++i) f.v[i] = pi[i] * G.order();
    return f;
}

// ---------------- spectral positivity ----------------

PositivityReport spectral_positivity_report(const RealFn& f, double tol) {
    Spectrum S = fourier(f);
    PositivityReport r{true, 1e300, 0};
    for (const auto& z : S.c) {
        r.min_real = std::min(r.min_real, z.real());
        r.max_imag = std::max(r.max_imag, std::abs(z.imag()));
    }
    r.is_positive = r.min_real >= -tol && r.max_imag <= tol;
    return r;
}

RealFn spectral_sqrt(const RealFn& f, double tol) {
    if (!spectral_positivity_report(f, tol).is_positive)
        fail_pre("spectral_sqrt", "input is not spectrally positive");
    Spectrum S = fourier(f);
    for (auto& z : S.c) z = std::sqrt(std::max(0.0, z.real()));
    return inverse_fourier(S);
}

// ---------------- laws ----------------

double central_moment(const RealFn& f, const DensityFn& D, int j) {
    double s = 0;
    for (int i = 0; i < f.size(); ++i) s += D.v[i] * std::pow(f.v[i] - 1.0, j);
    return s / f.size();
}

Rational central_moment_q(const QFn& f, int j) {
    Rational s = 0;
    for (const auto& x : f.v) {
        Rational d = x - 1, p = 1;
        for (int t = 0; t < j; ++t) p *= d;
        s += p;
    }
    return s / f.size();
}

namespace {

void need(bool cond, const std::string& law, const std::string& msg) {
    if (!cond) fail_pre(law, msg);
}

LawReport finish(std::string law, double lhs, double rhs, double margin, std::string note = {}) {
    return LawReport{std::move(law), lhs, rhs, margin, margin >= -kTol, std::move(note)};
}

// sum over alpha_1 + ... + alpha_k = 0 of prod f^(alpha_j)
cd fourier_kfold(const Spectrum& S, int k) {
    const GroupSpec& G = S.G;
    int n = G.order();
    std::vector<cd> acc(n, 0);
    acc[0] = 1;
    for (int t = 0; t < k; ++t) {
        std::vector<cd> nxt(n, 0);
        for (int b = 0; b < n; ++b) {
            if (acc[b] == cd(0)) continue;
            for (int a = 0; a < n; ++a) nxt[G.add(a, b)] += acc[b] * S.c[a];
        }
        acc.swap(nxt);
    }
    return acc[0];
}

LawReport law_decoupling(const LawInputs& in) {
    need(in.fns.size() >= 2, "decoupling", "needs two functions");
    need(in.k >= 2 && in.k % 2 == 0, "decoupling", "k must be even");
    RealFn f = in.fns[0], g = in.fns[1];
    bool dens = is_density(f, 1e-9) && is_density(g, 1e-9);
    RealFn fg = convolve(f, g), ff = crosscorr(f, f), gg = crosscorr(g, g);
    if (dens) {
        fg = add_const(fg, -1);
        ff = add_const(ff, -1);
        gg = add_const(gg, -1);
    }
    double lhs = knorm(fg, in.k);
    double rhs = std::sqrt(knorm(ff, in.k) * knorm(gg, in.k));
    double scale = std::max(1.0, rhs);
    return finish("decoupling", lhs, rhs, (rhs - lhs) / scale, dens ? "centered" : "uncentered");
}

LawReport law_fourier_knorm(const LawInputs& in) {
    need(!in.fns.empty(), "fourier_knorm", "needs a function");
    need(in.k >= 2 && in.k % 2 == 0, "fourier_knorm", "k must be even");
    const RealFn& f = in.fns[0];
    double lhs = 0;
    for (double x : f.v) lhs += std::pow(x, in.k);
    lhs /= f.size();
    cd rhs = fourier_kfold(fourier(f), in.k);
    double scale = std::max(1.0, std::abs(lhs));
    return finish("fourier_knorm", lhs, rhs.real(), -std::abs(lhs - rhs) / scale);
}

LawReport law_positive_correlation(const LawInputs& in) {
    need(!in.fns.empty(), "positive_correlation", "needs functions");
    for (const auto& f : in.fns)
        need(spectral_positivity_report(f).is_positive, "positive_correlation", "input not spectrally positive");
    RealFn prod(in.fns[0].G, 1.0);
    double rhs = 1;
    for (const auto& f : in.fns) {
        prod = pointwise(prod, f);
        rhs *= mean(f);
    }
    double lhs = mean(prod);
    return finish("positive_correlation", lhs, rhs, (lhs - rhs) / std::max(1.0, std::abs(rhs)));
}

LawReport law_odd_central_moments(const LawInputs& in) {
    need(!in.fns.empty(), "odd_central_moments", "needs a density");
    const RealFn& D = in.fns[0];
    need(is_density(D, 1e-9), "odd_central_moments", "input is not a density");
    need(spectral_positivity_report(D).is_positive, "odd_central_moments", "input not spectrally positive");
    double lo = 1e300;
    RealFn u = uniform_density(D.G);
    for (int j = 1; j <= std::max(1, in.k); j += 2) lo = std::min(lo, central_moment(D, u, j));
    return finish("odd_central_moments", lo, 0.0, lo);
}

LawReport law_odd_moments_bound(const LawInputs& in) {
    need(!in.fns.empty(), "odd_moments_bound", "needs X");
    need(in.k >= 2 && in.k % 2 == 0, "odd_moments_bound", "k0 must be even");
    const RealFn& X = in.fns[0];
    DensityFn D = in.fns.size() > 1 ? in.fns[1] : uniform_density(X.G);
    double dev = weighted_knorm(add_const(X, -1), in.k, D);
    double eps = in.eps > 0 ? in.eps : std::min(1.0, dev);
    need(eps > 0 && eps <= 1.0, "odd_moments_bound", "eps outside (0,1]");
    need(dev >= eps - 1e-12, "odd_moments_bound", "||X-1||_k0 < eps");
    int kp = static_cast<int>(std::ceil(2.0 * in.k / eps - 1e-12));
    for (int j = 1; j <= kp + 1; j += 2)
        need(central_moment(X, D, j) >= -1e-9 * std::pow(std::max(1.0, inf_norm(X)), j), "odd_moments_bound",
             "odd central moment " + std::to_string(j) + " negative");
    double lhs = weighted_knorm(X, kp, D);
    double rhs = std::pow(4.0, -1.0 / kp) * (1 + eps);
    std::string note = "k'=" + std::to_string(kp);
    if (eps <= 0.5) note += lhs >= 1 + eps / 2 - kTol ? "; >=1+eps/2 holds" : "; >=1+eps/2 FAILS";
    return finish("odd_moments_bound", lhs, rhs, lhs - rhs, note);
}

LawReport law_local_decoupling(const LawInputs& in) {
    need(in.fns.size() >= 3, "local_decoupling", "needs f, g, D");
    need(in.k >= 2 && in.k % 2 == 0, "local_decoupling", "k must be even");
    const RealFn &f = in.fns[0], &g = in.fns[1], &D = in.fns[2];
    need(is_density(D, 1e-9) && spectral_positivity_report(D).is_positive, "local_decoupling",
         "D must be a spectrally positive density");
    double lhs = std::pow(weighted_knorm(convolve(f, g), in.k, translate(D, in.theta)), 2);
    double rhs = weighted_knorm(crosscorr(f, f), in.k, D) * weighted_knorm(crosscorr(g, g), in.k, D);
    return finish("local_decoupling", lhs, rhs, (rhs - lhs) / std::max(1.0, rhs));
}

LawReport law_local_upper_to_lower(const LawInputs& in) {
    need(in.fns.size() >= 2, "local_upper_to_lower", "needs A, D");
    need(in.k >= 2 && in.k % 2 == 0, "local_upper_to_lower", "k must be even");
    const RealFn &A = in.fns[0], &D = in.fns[1];
    need(is_density(D, 1e-9) && spectral_positivity_report(D).is_positive, "local_upper_to_lower",
         "D must be a spectrally positive density");
    RealFn AA = crosscorr(A, A);
    double dev = weighted_knorm(add_const(AA, -1), in.k, D);
    double eps = in.eps > 0 ? in.eps : std::min(0.5, dev);
    need(eps > 0 && eps <= 0.5 && dev >= eps - 1e-12, "local_upper_to_lower", "hypothesis fails");
    int kp = static_cast<int>(std::ceil(2.0 * in.k / eps - 1e-12));
    double lhs = weighted_knorm(AA, kp, D);
    return finish("local_upper_to_lower", lhs, 1 + eps / 2, lhs - 1 - eps / 2, "k'=" + std::to_string(kp));
}

LawReport law_compressions_escape(const LawInputs& in) {
    need(!in.fns.empty(), "compressions_escape", "needs D");
    const RealFn& D = in.fns[0];
    need(is_density(D, 1e-9), "compressions_escape", "D must be a density");
    need(in.k >= 1, "compressions_escape", "k < 1");
    DensityFn Dk = compress(D, in.k);
    double nk = knorm(D, in.k);
    double worst = 1e300, lhs1 = 0, rhs1 = 0;
    {
        RealFn S(D.G);
        for (int i = 0; i < D.size(); ++i) S.v[i] = D.v[i] <= (1 - in.eps) * nk ? 1 : 0;
        lhs1 = inner(Dk, S);
        double mid = std::pow(1 - in.eps, in.k) * mean(S);
        rhs1 = mid;
        worst = std::min({worst, mid - lhs1, std::exp(-in.eps * in.k) - mid});
    }
    if (in.k >= 2 && in.c > 0) {
        double thr = in.c * std::pow(nk, 1.0 + 1.0 / (in.k - 1));
        RealFn S(D.G);
        for (int i = 0; i < D.size(); ++i) S.v[i] = D.v[i] <= thr ? 1 : 0;
        double l2 = inner(Dk, S), r2 = std::pow(in.c, in.k - 1);
        worst = std::min(worst, r2 - l2);
    }
    return finish("compressions_escape", lhs1, rhs1, worst);
}

LawReport law_bs_infnorm(const LawInputs& in) {
    need(in.fns.size() >= 2, "bs_infnorm", "needs D, D'");
    const RealFn &D = in.fns[0], &D2 = in.fns[1];
    need(is_density(D, 1e-9) && is_density(D2, 1e-9), "bs_infnorm", "inputs must be densities");
    double eps = in.eps > 0 ? in.eps : std::max(inf_norm(D), inf_norm(D2)) - 1;
    need(inf_norm(D) <= 1 + eps + 1e-12 && inf_norm(D2) <= 1 + eps + 1e-12, "bs_infnorm", "sup bound fails");
    double lhs = inf_norm(add_const(convolve(D, D2), -1));
    return finish("bs_infnorm", lhs, eps, eps - lhs);
}

LawReport law_khintchine(const LawInputs& in) {
    // fns is the pool; each v_i is uniform over the pool.
    need(!in.fns.empty(), "khintchine", "needs a vector pool");
    need(in.k >= 2 && in.k % 2 == 0, "khintchine", "k must be even");
    need(in.ell >= 1, "khintchine", "ell < 1");
    int m = in.fns[0].size(), P = static_cast<int>(in.fns.size());
    std::vector<double> mu(m, 0);
    double M = 0;
    for (const auto& f : in.fns) {
        for (int j = 0; j < m; ++j) {
            need(f.v[j] >= 0, "khintchine", "vectors must be nonnegative");
            mu[j] += f.v[j] / P;
            M += std::pow(f.v[j], in.k) / m / P;
        }
    }
    auto eval = [&](const std::vector<int>& pick) {
        double s = 0;
        for (int j = 0; j < m; ++j) {
            double v = 0;
            for (int i : pick) v += in.fns[i].v[j] - mu[j];
            s += std::pow(v / in.ell, in.k);
        }
        return s / m;
    };
    double est = 0;
    double combos = std::pow(P, in.ell);
    std::string note;
    std::vector<int> pick(in.ell, 0);
    if (combos <= 2e5) {
        while (true) {
            est += eval(pick);
            int i = in.ell - 1;
            while (i >= 0 && ++pick[i] == P) pick[i--] = 0;
            if (i < 0) break;
        }
        est /= combos;
        note = "exact expectation";
    } else {
        Rng rng(in.seed);
        std::uniform_int_distribution<int> U(0, P - 1);
        long long T = std::max(1LL, in.samples);
        for (long long t = 0; t < T; ++t) {
            for (auto& x : pick) x = U(rng);
            est += eval(pick);
        }
        est /= T;
        note = "monte carlo, " + std::to_string(T) + " samples";
    }
    double rhs = std::pow(static_cast<double>(in.k) / in.ell, in.k / 2.0) * M;
    return finish("khintchine", est, rhs, (rhs - est) / std::max(1.0, rhs), note);
}

}  // namespace

std::vector<std::string> law_ids() {
    return {"decoupling",      "fourier_knorm",        "positive_correlation", "odd_central_moments",
            "odd_moments_bound", "local_decoupling",   "local_upper_to_lower", "compressions_escape",
            "bs_infnorm",      "khintchine"};
}

LawReport law_check(const std::string& id, const LawInputs& in) {
    if (id == "decoupling") return law_decoupling(in);
    if (id == "fourier_knorm") return law_fourier_knorm(in);
    if (id == "positive_correlation") return law_positive_correlation(in);
    if (id == "odd_central_moments") return law_odd_central_moments(in);
    if (id == "odd_moments_bound") return law_odd_moments_bound(in);
    if (id == "local_decoupling") return law_local_decoupling(in);
    if (id == "local_upper_to_lower") return law_local_upper_to_lower(in);
    if (id == "compressions_escape") return law_compressions_escape(in);
    if (id == "bs_infnorm") return law_bs_infnorm(in);
    if (id == "khintchine") return law_khintchine(in);
    fail_pre("law_check", "unknown law id '" + id + "'");
}

}  // namespace apc
