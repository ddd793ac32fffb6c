#pragma once
// Independent brute-force references. These deliberately avoid the library's
// index arithmetic and transforms: everything goes through raw coordinates.
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using Pt = std::vector<int>;

inline std::vector<Pt> all_points(const std::vector<int>& mod) {
    std::vector<Pt> out;
    Pt x(mod.size(), 0);
    while (true) {
        out.push_back(x);
        int i = static_cast<int>(mod.size()) - 1;
        while (i >= 0 && ++x[i] == mod[i]) x[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

inline int idx(const std::vector<int>& mod, const Pt& x) {
    int r = 0;
    for (size_t i = 0; i < mod.size(); ++i) r = r * mod[i] + ((x[i] % mod[i]) + mod[i]) % mod[i];
    return r;
}

inline Pt plus(const std::vector<int>& mod, const Pt& a, const Pt& b, int sb = 1) {
    Pt r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = (((a[i] + sb * b[i]) % mod[i]) + mod[i]) % mod[i];
    return r;
}

inline std::complex<double> chi(const std::vector<int>& mod, const Pt& a, const Pt& x) {
    double t = 0;
    for (size_t i = 0; i < mod.size(); ++i) t += static_cast<double>(a[i]) * x[i] / mod[i];
    return std::polar(1.0, 2 * std::numbers::pi * t);
}

// (f*g)(x) = E_y f(y) g(x-y)
inline std::vector<double> conv(const std::vector<int>& mod, const std::vector<double>& f,
                                const std::vector<double>& g, bool cross) {
    auto pts = all_points(mod);
    std::vector<double> out(pts.size(), 0);
    for (const auto& x : pts)
        for (const auto& y : pts) {
            Pt z = cross ? plus(mod, x, y) : plus(mod, x, y, -1);
            out[idx(mod, x)] += f[idx(mod, y)] * g[idx(mod, z)];
        }
    for (auto& v : out) v /= static_cast<double>(pts.size());
    return out;
}

inline std::vector<std::complex<double>> dft(const std::vector<int>& mod, const std::vector<double>& f) {
    auto pts = all_points(mod);
    std::vector<std::complex<double>> out(pts.size());
    for (const auto& a : pts) {
        std::complex<double> s = 0;
        for (const auto& y : pts) s += f[idx(mod, y)] * chi(mod, a, y);
        out[idx(mod, a)] = s / static_cast<double>(pts.size());
    }
    return out;
}

// number of nontrivial (x != y) triples x + y = 2z in a set of integers
inline long long aps_cubic(const std::vector<long long>& A) {
    long long c = 0;
    for (long long x : A)
        for (long long y : A)
            for (long long z : A)
                if (x != y && x + y == 2 * z) ++c;
    return c;
}

// largest subset of {0..n-1} avoiding every listed triple, by branch and bound
inline int max_free(int n, const std::vector<std::array<int, 3>>& triples) {
    std::vector<std::vector<std::array<int, 3>>> by_last(n);
    for (auto t : triples) by_last[std::max({t[0], t[1], t[2]})].push_back(t);
    std::vector<char> in(n, 0);
    int best = 0;
    auto rec = [&](auto&& self, int i, int size) -> void {
        if (size + (n - i) <= best) return;
        if (i == n) {
            best = size;
            return;
        }
        bool ok = true;
        for (auto t : by_last[i]) {
            int c = 0;
            for (int u : t) c += (u == i) || in[u];
            if (c == 3) ok = false;
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

// nontrivial triples x + y = 2z among all points of a group with the given moduli
inline std::vector<std::array<int, 3>> group_triples(const std::vector<int>& mod) {
    auto pts = all_points(mod);
    std::vector<std::array<int, 3>> out;
    for (auto& x : pts)
        for (auto& y : pts) {
            if (x == y) continue;
            for (auto& z : pts)
                if (plus(mod, x, y) == plus(mod, z, z)) out.push_back({idx(mod, x), idx(mod, y), idx(mod, z)});
        }
    return out;
}

}  // namespace oracle
