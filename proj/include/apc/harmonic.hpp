#pragma once
#include <optional>
#include <string>
#include <vector>

#include "apc/group.hpp"

namespace apc {

struct RealFn {
    GroupSpec G;
    std::vector<double> v;
    RealFn() = default;
    RealFn(const GroupSpec& g, double fill = 0.0) : G(g), v(g.order(), fill) {}
    RealFn(const GroupSpec& g, std::vector<double> vals) : G(g), v(std::move(vals)) {}
    double operator[](int i) const { return v[i]; }
    double& operator[](int i) { return v[i]; }
    int size() const { return static_cast<int>(v.size()); }
};
// Densities share the representation; is_density checks the invariant.
using DensityFn = RealFn;

// Exact counterpart used by certification paths.
struct QFn {
    GroupSpec G;
    std::vector<Rational> v;
    QFn() = default;
    QFn(const GroupSpec& g, const Rational& fill = 0) : G(g), v(g.order(), fill) {}
    int size() const { return static_cast<int>(v.size()); }
    RealFn to_real() const;
};

struct Spectrum {
    GroupSpec G;
    std::vector<cd> c;
};

enum class RepKind { Sum, Difference };

struct RepCount {
    RepKind kind;
    Subset A, B;
    std::vector<long long> counts;
};

bool is_density(const RealFn& f, double tol = 1e-10);
bool is_density(const QFn& f);

DensityFn indicator_density(const GroupSpec& G, const Subset& A);
QFn indicator_density_q(const GroupSpec& G, const Subset& A);
RealFn indicator(const GroupSpec& G, const Subset& A);
DensityFn uniform_density(const GroupSpec& G);

// E_x f(x) g(x)
double inner(const RealFn& f, const RealFn& g);
Rational inner(const QFn& f, const QFn& g);
double mean(const RealFn& f);
RealFn add_const(RealFn f, double c);
RealFn pointwise(const RealFn& f, const RealFn& g);
RealFn translate(const RealFn& f, int theta);  // (T_theta f)(x) = f(x - theta)
RealFn reflect(const RealFn& f);               // x -> f(-x)

// (f*g)(x) = E_y f(y) g(x-y);  (f⋆g)(x) = E_y f(y) g(x+y)
RealFn convolve_naive(const RealFn& f, const RealFn& g);
RealFn crosscorr_naive(const RealFn& f, const RealFn& g);
RealFn convolve_fast(const RealFn& f, const RealFn& g);
RealFn crosscorr_fast(const RealFn& f, const RealFn& g);
RealFn convolve(const RealFn& f, const RealFn& g);
RealFn crosscorr(const RealFn& f, const RealFn& g);
QFn convolve(const QFn& f, const QFn& g);
QFn crosscorr(const QFn& f, const QFn& g);

double knorm(const RealFn& f, double k);
double weighted_knorm(const RealFn& f, double k, const DensityFn& D);
double inf_norm(const RealFn& f);

// f^(alpha) = E_y f(y) e_alpha(y); inverse f(x) = sum_alpha f^(alpha) e_alpha(-x).
Spectrum fourier(const RealFn& f);
Spectrum fourier_naive(const RealFn& f);
RealFn inverse_fourier(const Spectrum& S);
// In-place multi-dimensional transform without scaling; sign = +1 or -1.
void dft_nd(const GroupSpec& G, std::vector<cd>& a, int sign);
void dft_1d(std::vector<cd>& a, int sign);

RepCount rep_counts(const GroupSpec& G, const Subset& A, const Subset& B, RepKind kind);
// A⋆A as an exact density from difference counts.
QFn self_crosscorr_q(const GroupSpec& G, const Subset& A);

DensityFn compress(const DensityFn& D, int k);
QFn compress(const QFn& D, int k);

double kdivergence(const std::vector<double>& pi, const std::vector<double>& pi2, double k);
Rational kdivergence_pow(const std::vector<Rational>& pi, const std::vector<Rational>& pi2, int k);

struct PositivityReport {
    bool is_positive;
    double min_real;
    double max_imag;
};
PositivityReport spectral_positivity_report(const RealFn& f, double tol = 1e-9);
RealFn spectral_sqrt(const RealFn& f, double tol = 1e-9);

// Counting-measure <-> density conversions: pi(x) = f(x)/|G|.
std::vector<double> to_distribution(const DensityFn& f);
DensityFn from_distribution(const GroupSpec& G, const std::vector<double>& pi);

struct LawReport {
    std::string law;
    double lhs = 0, rhs = 0, margin = 0;
    bool holds = false;
    std::string note;
};

struct LawInputs {
    std::vector<RealFn> fns;  // law-specific positional functions
    int k = 2;
    double eps = 0.0;
    double c = 0.0;
    int theta = 0;
    int ell = 1;
    long long samples = 0;
    uint64_t seed = 0;
};

// Central moment E(X - 1)^j of X = f(x) under x ~ D.
double central_moment(const RealFn& f, const DensityFn& D, int j);
Rational central_moment_q(const QFn& f, int j);

LawReport law_check(const std::string& law_id, const LawInputs& in);
std::vector<std::string> law_ids();

}  // namespace apc
