#include "apc/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace apc {

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

GroupSpec::GroupSpec(std::vector<int> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) fail_pre("make_group", "no moduli given");
    long long order = 1;
    for (int m : moduli_) {
        if (m < 2) fail_pre("make_group", "modulus " + std::to_string(m) + " < 2");
        order *= m;
        if (order > size_budget())
            fail_budget("make_group", "group order exceeds " + std::to_string(size_budget()));
        lcm_ = std::lcm(lcm_, static_cast<long long>(m));
    }
    order_ = static_cast<int>(order);
    strides_.assign(moduli_.size(), 1);
    for (int i = rank() - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * moduli_[i + 1];
    prime_space_ = is_prime(moduli_[0]) &&
                   std::all_of(moduli_.begin(), moduli_.end(), [&](int m) { return m == moduli_[0]; });
    neg_.resize(order_);
    for (int a = 0; a < order_; ++a) {
        Elem x = coords(a);
        for (int i = 0; i < rank(); ++i) x[i] = (moduli_[i] - x[i]) % moduli_[i];
        neg_[a] = index(x);
    }
    if (order_ <= 4096) {
        auto tab = std::make_shared<std::vector<int>>(static_cast<size_t>(order_) * order_);
        for (int a = 0; a < order_; ++a)
            for (int b = 0; b < order_; ++b)
                (*tab)[static_cast<size_t>(a) * order_ + b] =
                    rank() == 1 ? (a + b >= order_ ? a + b - order_ : a + b) : add_slow(a, b);
        add_tab_ = std::move(tab);
    }
}

int GroupSpec::add_slow(int a, int b) const {
    int r = 0;
    for (int i = 0; i < rank(); ++i) {
        int xa = (a / strides_[i]) % moduli_[i];
        int xb = (b / strides_[i]) % moduli_[i];
        r += ((xa + xb) % moduli_[i]) * strides_[i];
    }
    return r;
}

int GroupSpec::scale(int a, long long c) const {
    Elem x = coords(a);
    for (int i = 0; i < rank(); ++i) {
        long long v = (static_cast<long long>(x[i]) * (c % moduli_[i])) % moduli_[i];
        x[i] = static_cast<int>((v + moduli_[i]) % moduli_[i]);
    }
    return index(x);
}

int GroupSpec::index(const Elem& x) const {
    if (!valid(x)) fail_pre("group", "element outside " + describe());
    int r = 0;
    for (int i = 0; i < rank(); ++i) r += x[i] * strides_[i];
    return r;
}

Elem GroupSpec::coords(int idx) const {
    Elem x(moduli_.size());
    for (int i = 0; i < rank(); ++i) x[i] = (idx / strides_[i]) % moduli_[i];
    return x;
}

bool GroupSpec::valid(const Elem& x) const {
    if (x.size() != moduli_.size()) return false;
    for (int i = 0; i < rank(); ++i)
        if (x[i] < 0 || x[i] >= moduli_[i]) return false;
    return true;
}

std::string GroupSpec::describe() const {
    std::string s;
    for (int i = 0; i < rank(); ++i) s += (i ? "x" : "") + std::string("Z_") + std::to_string(moduli_[i]);
    return s;
}

long long GroupSpec::phase(int alpha, int x) const {
    long long t = 0;
    for (int i = 0; i < rank(); ++i) {
        long long a = (alpha / strides_[i]) % moduli_[i];
        long long b = (x / strides_[i]) % moduli_[i];
        t = (t + (a * b % moduli_[i]) * (lcm_ / moduli_[i])) % lcm_;
    }
    return t;
}

GroupSpec make_group(const std::vector<int>& moduli) { return GroupSpec(moduli); }

cd character_value(const GroupSpec& G, const Elem& alpha, const Elem& x) {
    if (alpha.size() != x.size() || !G.valid(alpha) || !G.valid(x))
        fail_pre("character_value", "dimension mismatch");
    return character_value(G, G.index(alpha), G.index(x));
}

cd character_value(const GroupSpec& G, int alpha, int x) {
    double t = 2.0 * std::numbers::pi * static_cast<double>(G.phase(alpha, x)) / static_cast<double>(G.lcm());
    return {std::cos(t), std::sin(t)};
}

double char_dist(const GroupSpec& G, int alpha, int x) {
    long long ph = G.phase(alpha, x);
    long long L = G.lcm();
    long long d = std::min(ph, L - ph);
    return 2.0 * std::sin(std::numbers::pi * static_cast<double>(d) / static_cast<double>(L));
}

// ---------------- F_p linear algebra ----------------

long long inv_mod(long long a, long long p) {
    long long g = p, x = 0, x1 = 1, a1 = ((a % p) + p) % p;
    while (a1) {
        long long q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) fail_pre("inv_mod", "not invertible");
    return ((x % p) + p) % p;
}

std::vector<int> rref(Mat& m, int p) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] % p) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        long long inv = inv_mod(m[r][c], p);
        for (int j = 0; j < cols; ++j) m[r][j] = static_cast<int>(m[r][j] * inv % p);
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            long long f = m[i][c];
            for (int j = 0; j < cols; ++j) m[i][j] = static_cast<int>(((m[i][j] - f * m[r][j]) % p + p) % p);
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    return pivots;
}

int rank_mod_p(Mat m, int p) { return static_cast<int>(rref(m, p).size()); }

Mat kernel_basis(const Mat& m0, int ncols, int p) {
    Mat m = m0;
    std::vector<int> piv = rref(m, p);
    std::vector<char> is_piv(ncols, 0);
    for (int c : piv) is_piv[c] = 1;
    Mat out;
    for (int f = 0; f < ncols; ++f) {
        if (is_piv[f]) continue;
        std::vector<int> v(ncols, 0);
        v[f] = 1;
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = (p - m[i][f]) % p;
        out.push_back(v);
    }
    return out;
}

// ---------------- affine subspaces ----------------

AffineSubspace::AffineSubspace(const GroupSpec& G, Mat directions, Elem point) : G_(G), shift_(std::move(point)) {
    if (!G.is_prime_vector_space()) fail_pre("affine_subspace", "group is not a prime vector space");
    int p = G.p();
    for (auto& row : directions)
        for (auto& v : row) v = ((v % p) + p) % p;
    rref(directions, p);
    basis_ = std::move(directions);
    finish();
}

void AffineSubspace::finish() {
    int p = G_.p(), n = G_.rank();
    // canonical shift: zero in every pivot column of the basis
    for (const auto& row : basis_) {
        int c = static_cast<int>(std::find_if(row.begin(), row.end(), [](int v) { return v != 0; }) - row.begin());
        long long f = shift_[c];
        if (!f) continue;
        for (int j = 0; j < n; ++j) shift_[j] = static_cast<int>(((shift_[j] - f * row[j]) % p + p) % p);
    }
    Mat M = basis_.empty() ? Mat{} : basis_;
    dual_ = basis_.empty() ? Mat{} : kernel_basis(M, n, p);
    if (basis_.empty()) {
        dual_.clear();
        for (int i = 0; i < n; ++i) {
            std::vector<int> e(n, 0);
            e[i] = 1;
            dual_.push_back(e);
        }
    }
    rref(dual_, p);
    rhs_.assign(dual_.size(), 0);
    for (size_t i = 0; i < dual_.size(); ++i) {
        long long s = 0;
        for (int j = 0; j < n; ++j) s += static_cast<long long>(dual_[i][j]) * shift_[j];
        rhs_[i] = static_cast<int>(s % p);
    }
}

AffineSubspace AffineSubspace::from_equations(const GroupSpec& G, const Mat& M0, const std::vector<int>& b) {
    if (!G.is_prime_vector_space()) fail_pre("affine_subspace", "group is not a prime vector space");
    int p = G.p(), n = G.rank();
    // solve M x = b on the augmented matrix
    Mat aug;
    for (size_t i = 0; i < M0.size(); ++i) {
        auto row = M0[i];
        row.push_back(b[i]);
        for (auto& v : row) v = ((v % p) + p) % p;
        aug.push_back(row);
    }
    std::vector<int> piv = rref(aug, p);
    if (!piv.empty() && piv.back() == n) fail_pre("affine_subspace", "inconsistent equations");
    Elem x(n, 0);
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug[i][n];
    Mat Mred;
    for (auto& row : aug) Mred.emplace_back(row.begin(), row.begin() + n);
    Mat dirs = kernel_basis(Mred, n, p);
    return AffineSubspace(G, dirs, x);
}

long long AffineSubspace::size() const {
    long long s = 1;
    for (int i = 0; i < dim(); ++i) s *= G_.p();
    return s;
}

bool AffineSubspace::contains(const Elem& x) const {
    int p = G_.p(), n = G_.rank();
    for (size_t i = 0; i < dual_.size(); ++i) {
        long long s = 0;
        for (int j = 0; j < n; ++j) s += static_cast<long long>(dual_[i][j]) * x[j];
        if (s % p != rhs_[i]) return false;
    }
    return true;
}

Subset AffineSubspace::members() const {
    int p = G_.p(), n = G_.rank(), d = dim();
    Subset out;
    std::vector<int> c(d, 0);
    while (true) {
        Elem x = shift_;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < n; ++j) x[j] = (x[j] + c[i] * basis_[i][j]) % p;
        out.push_back(G_.index(x));
        int i = d - 1;
        while (i >= 0 && ++c[i] == p) c[i--] = 0;
        if (i < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string AffineSubspace::describe() const {
    std::ostringstream os;
    os << "codim " << codim() << ", shift (";
    for (size_t i = 0; i < shift_.size(); ++i) os << (i ? "," : "") << shift_[i];
    os << ")";
    return os.str();
}

AffineSubspace span_affine(const GroupSpec& G, const Subset& points) {
    if (!G.is_prime_vector_space()) fail_pre("span_affine", "group is not a prime vector space");
    if (points.empty()) fail_pre("span_affine", "empty point set");
    Elem base = G.coords(points[0]);
    Mat dirs;
    for (size_t i = 1; i < points.size(); ++i) {
        Elem x = G.coords(points[i]);
        for (int j = 0; j < G.rank(); ++j) x[j] = ((x[j] - base[j]) % G.p() + G.p()) % G.p();
        dirs.push_back(x);
    }
    return AffineSubspace(G, dirs, base);
}

void enumerate_rref(int c, int n, int p, const std::function<void(const Mat&)>& visit) {
    if (c == 0) {
        visit(Mat{});
        return;
    }
    if (c > n) return;
    std::vector<int> piv(c);
    std::iota(piv.begin(), piv.end(), 0);
    while (true) {
        // free slots: (row i, column j) with j > piv[i], j not a pivot
        std::vector<std::pair<int, int>> slots;
        std::vector<char> isp(n, 0);
        for (int q : piv) isp[q] = 1;
        for (int i = 0; i < c; ++i)
            for (int j = piv[i] + 1; j < n; ++j)
                if (!isp[j]) slots.emplace_back(i, j);
        std::vector<int> val(slots.size(), 0);
        Mat m(c, std::vector<int>(n, 0));
        while (true) {
            for (auto& row : m) std::fill(row.begin(), row.end(), 0);
            for (int i = 0; i < c; ++i) m[i][piv[i]] = 1;
            for (size_t s = 0; s < slots.size(); ++s) m[slots[s].first][slots[s].second] = val[s];
            visit(m);
            int s = static_cast<int>(slots.size()) - 1;
            while (s >= 0 && ++val[s] == p) val[s--] = 0;
            if (s < 0) break;
        }
        int i = c - 1;
        while (i >= 0 && piv[i] == n - c + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < c; ++j) piv[j] = piv[j - 1] + 1;
    }
}

long long count_affine_subspaces(int n, int p, int max_codim) {
    // Gaussian binomials times cosets
    long long total = 0;
    for (int c = 0; c <= std::min(max_codim, n); ++c) {
        double num = 1, den = 1;
        for (int i = 0; i < c; ++i) {
            num *= std::pow(p, n - i) - 1;
            den *= std::pow(p, c - i) - 1;
        }
        total += std::llround(num / den * std::pow(p, c));
    }
    return total;
}

void enumerate_affine_subspaces(const GroupSpec& G, int max_codim,
                                const std::function<void(const AffineSubspace&)>& visit) {
    if (!G.is_prime_vector_space()) fail_pre("enumerate_affine_subspaces", "group is not a prime vector space");
    int n = G.rank(), p = G.p();
    if (count_affine_subspaces(n, p, max_codim) > search_budget())
        fail_budget("enumerate_affine_subspaces", "too many subspaces");
    for (int c = 0; c <= std::min(max_codim, n); ++c) {
        enumerate_rref(c, n, p, [&](const Mat& M) {
            std::vector<int> b(c, 0);
            while (true) {
                visit(AffineSubspace::from_equations(G, M, b));
                int i = c - 1;
                while (i >= 0 && ++b[i] == p) b[i--] = 0;
                if (i < 0) break;
            }
        });
    }
}

}  // namespace apc
