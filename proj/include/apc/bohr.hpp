#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apc/harmonic.hpp"

namespace apc {

struct BohrSet {
    GroupSpec G;
    Subset freqs;     // character indices
    double rho = 0;
    int rank() const { return static_cast<int>(freqs.size()); }
};

// Membership uses |e_gamma(x) - 1| <= rho + 1e-12 so boundary points such as
// 2 sin(pi/6) = 1 are not lost to rounding.
Subset bohr_members(const BohrSet& B);
BohrSet dilate(const BohrSet& B, double delta);

struct DilateCheck {
    double delta = 0;
    long long size = 0;
    double bound = 0;          // (delta/2)^r |B|
    bool holds = false;
    bool sumset_inclusion = false;  // B + B_delta within B_{1+delta}
};

struct SizeEstimates {
    long long size = 0;
    double lower = 0;          // (rho/2pi)^r |G|
    bool lower_holds = false;
    long long size2 = 0;       // |B_2|
    double doubling = 0;       // 6^r |B|
    bool doubling_holds = false;
    std::vector<DilateCheck> dilates;
    bool all_hold = false;
};
SizeEstimates size_estimates(const BohrSet& B, const std::vector<double>& deltas = {0, 0.25, 0.5, 0.75, 1});

struct RegularityReport {
    bool regular = true;
    int points = 0;            // delta values evaluated
    double failing_delta = -1;
    std::string failing_side;  // "upper" or "lower"
    double worst_upper = 0;    // max of |B_{1+d}|/|B| - (1 + 12 r d)
    double worst_lower = 0;    // max of (1 - 12 r d) - |B_{1-d}|/|B|
};
// Grid over [0, 1/12r] plus every breakpoint of the member count inside that range.
RegularityReport is_regular(const BohrSet& B, int grid_steps = 64);

struct RegularizeReport {
    std::optional<double> delta_star;
    int grid_steps = 0;
    int rejected = 0;
    std::string note;
};
RegularizeReport regularize(const BohrSet& B, int grid_steps = 64);

struct IntervalBohr {
    int m = 0;
    BohrSet B;
    bool members_match = false;   // Bohr set equals [-m, m]
    double lo = 0, ratio = 0, hi = 0;  // rho/2pi <= m/N <= rho/4
    bool sandwich_holds = false;
};
IntervalBohr interval_as_bohr(int N, double rho);

// {a + sum c_i x_i : x_i in [N_i]}, [N] = {1..N}; modulus 0 means Z.
struct Progression {
    long long modulus = 0;
    long long a = 0;
    std::vector<long long> c;
    std::vector<long long> lengths;
    int rank() const { return static_cast<int>(c.size()); }
    long long volume() const;
    std::vector<long long> members() const;  // with multiplicity, lexicographic in x
    bool proper() const;
};

struct ProgressionReport {
    Progression P;
    bool proper = false;
    bool contained = false;
    double bound = 0;          // (rho / 2 pi r)^r N
    bool meets_bound = false;
    std::string method;
    std::string note;
};
ProgressionReport progression_in_bohr(const BohrSet& B);

// ---- Freiman homomorphisms ----
using Point = std::vector<long long>;
// Coordinate moduli; 0 is Z.
struct Space {
    std::vector<long long> moduli;
    Point add(const Point& a, const Point& b) const;
    Point sub(const Point& a, const Point& b) const;
    Point reduce(Point a) const;
};

struct FreimanMap {
    Space dom, cod;
    std::vector<Point> x, y;   // explicit table x[i] -> y[i]
};

struct FreimanCert {
    int t = 0;
    bool verified = false;
    bool exhaustive = true;
    long long tuples = 0;
    std::optional<std::pair<std::vector<int>, std::vector<int>>> counterexample;  // domain indices
    std::string note;
};
// Exhaustive over t-multisets when C(|A|+t-1, t) <= budget, otherwise sampled (never a certificate).
FreimanCert check_freiman(const FreimanMap& phi, int t, long long budget = -1, uint64_t seed = 0);
FreimanMap progression_label_map(const Progression& P);
FreimanMap mod_map(const std::vector<Point>& X, const std::vector<long long>& N);

// ---- smoothing ----
struct SmoothingReport {
    bool contains_difference_set = false;
    bool identity_holds = false;
    std::string value_exact;          // 1/|S|
    std::optional<bool> one_sided_holds;
    double lhs = 0, rhs = 0, delta = 0;
};
// nu: weights on B (empty means uniform); f: nonnegative values at listed points.
SmoothingReport smoothing_check(const Space& sp, const std::vector<Point>& A, const std::vector<Point>& B,
                                const std::vector<Point>& S, const std::vector<Rational>& nu = {},
                                const std::vector<std::pair<Point, double>>& f = {});

struct BohrSmoothingReport {
    double lhs = 0, rhs = 0;
    bool holds = false;
    bool regular = false;
};
BohrSmoothingReport bohr_smoothing_check(const BohrSet& B, double delta, const RealFn& f);

// ---- safe sets ----
using Interval = std::pair<long long, long long>;  // closed, integer

struct SafeSpec {
    std::vector<long long> N;
    double delta = 0;
    std::vector<Interval> U, M;   // upper portion [a+2d(b-a), b] and middle slice of [1, N_i]
    std::vector<long long> v, m;  // centre and half-widths of the nice-configuration cube
    double upper_fraction = 0;
    bool upper_fraction_ok = false;  // |U|/|P| >= 1 - 2 delta r
};
SafeSpec make_safe_spec(const std::vector<long long>& N, double delta);
// x, y in U_i and z in M_i with x + y = 2z mod N_i force x + y = 2z (exhaustive per coordinate).
bool upper_middle_property(const SafeSpec& s);

struct Pullback {
    std::vector<Interval> intervals;
    bool matches_observation = false;
};
// phi^{-1}(a + phi([m])) inside [N].
Pullback pullback_interval(long long N, long long a, long long m);

struct SafeBoxReport {
    std::vector<Interval> U;          // [ceil(delta N_i), N_i]
    std::vector<Point> B;             // product of [m_i] mod N_i
    long long thetas = 0;
    bool exhaustive = true;
    bool certified = false;
    std::optional<Point> failing_theta;
    std::optional<FreimanCert> failure;
};
SafeBoxReport safe_box(const std::vector<long long>& N, double delta, const std::vector<long long>& m, int t,
                       long long theta_cap = 4096, uint64_t seed = 0);

}  // namespace apc
