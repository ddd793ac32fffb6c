#pragma once
#include <optional>
#include <string>
#include <vector>

#include "apc/sifting.hpp"

namespace apc {

struct SpreadReport {
    double gamma = 1;
    std::string gamma_exact;            // set when the value is rational
    int r_or_k = 0;
    std::optional<AffineSubspace> subspace;
    Subset B, C;                        // star-norm witness pair
    bool exhaustive = true;
    long long evaluated = 0;
    std::string note;
};

// max over affine V with codim <= r of <V, A>. Ties: smallest codim, then RREF dual, then rhs.
SpreadReport perp_norm(const GroupSpec& G, const Subset& A, int r);
// Same maximisation for an arbitrary real function.
SpreadReport perp_norm_fn(const RealFn& f, int r);
// <V, A> for one affine subspace, exact.
Rational subspace_density_ratio(const AffineSubspace& V, const Subset& A);

enum class StarMode { Exhaustive, Witness };
constexpr int kStarExhaustiveCap = 16;
SpreadReport star_norm(const GroupSpec& G, const Subset& A, double k, StarMode mode,
                       const std::vector<std::pair<Subset, Subset>>& witnesses = {});
// <B * C, A> exactly.
Rational star_value(const GroupSpec& G, const Subset& A, const Subset& B, const Subset& C);

// Coordinates of the points of S (all inside V) with respect to V's RREF basis.
GroupSpec quotient_group(const AffineSubspace& V);
Subset to_quotient(const AffineSubspace& V, const Subset& S);
Subset from_quotient(const AffineSubspace& V, const Subset& Q);
AffineSubspace lift_subspace(const AffineSubspace& V, const AffineSubspace& inner);
// V = W^perp for W the span of the given characters.
AffineSubspace annihilator(const GroupSpec& G, const Subset& chars);
double set_density(const GroupSpec& G, const Subset& A);
double density_deficit(const GroupSpec& G, const Subset& A);  // d = max(1, lg |G|/|A|)

struct IncrementStep {
    AffineSubspace chosen;       // ambient coordinates
    double density_before = 0;
    double density_after = 0;
    std::string ratio_exact;     // <V', A_i> in the quotient
};

struct IncrementTrace {
    std::vector<IncrementStep> steps;
    Subset final_set;
    AffineSubspace final_container;
    int iterations = 0;
    double initial_density = 0;
    double final_density = 0;
    double d = 0;
    int iteration_bound = 0;     // ceil(d/eps)
    int codim_bound = 0;         // r * ceil(d/eps)
    double final_perp = 1;       // perp norm of the final set in its quotient
    bool spread_certified = false;
    bool exhaustive = true;
    std::string note;
};

IncrementTrace greedy_spread(const GroupSpec& G, const Subset& A, double eps, int r);

struct ChangReport {
    Subset spec;                 // {alpha : |A^(alpha)| >= eps}
    Subset independent;          // greedy maximal independent subset of spec
    double d = 0;
    double bound = 0;            // 4 d / eps^2
    bool holds = true;
};
ChangReport chang_check(const GroupSpec& G, const Subset& A, double eps);

struct CrootSisaskReport {
    Subset S;
    int ell = 0;
    int k = 0;
    double eps = 0;
    double max_pair_deviation = 0;   // max over p,p' in S of ||T_{p-p'} A*f - A*f||_k
    bool certified = false;
    double size_fraction = 0;        // |S|/|A'|
    double reference_exponent = 0;   // k d / eps^2, the shape of the lower bound
    long long trials = 0;
    std::string note;
};
CrootSisaskReport croot_sisask(const GroupSpec& G, const Subset& A, const RealFn& f, int k, double eps, int trials,
                               uint64_t seed, const Subset& Aprime = {});

struct SandersReport {
    AffineSubspace V;
    CrootSisaskReport cs;
    Subset spec;                     // Spec_{1/2}(S)
    int codim = 0;
    int t = 0;
    double eta = 0;
    int norm_k = 0;
    double deviation = 0;            // |<V*A*B, f> - <A*B, f>|
    double pointwise_deviation = -1; // max over v, x; -1 when skipped
    bool pointwise_checked = false;
    bool certified = false;
    double reference_codim = 0;      // k d^3 / eps^2
    std::string note;
};
SandersReport sanders_invariance(const GroupSpec& G, const Subset& A, const Subset& B, const RealFn& f, double eps,
                                 uint64_t seed, int trials = 64);

struct StageRecord {
    std::string id;
    double value = 0;
    double threshold = 0;
    bool holds = false;
    std::string note;
};

struct TheoremIIReport {
    bool certified = false;
    std::string failed_stage;
    std::vector<StageRecord> stages;
    AffineSubspace witness;          // V''
    double witness_value = 0;        // <V'', A>
    int codim = 0;
    double k_used = 0;
    double fourier_sum = 0;          // sum over W minus 0 of |A^|^2
    double projection_l2 = 0;        // ||P_W A - 1||_2^2, computed directly
    Subset Aprime, Bprime;
    SandersReport sanders;
    std::string note;
};
TheoremIIReport ii_part2(const GroupSpec& G, const Subset& A, double k, double eps, const SearchBudget& budget);
TheoremIIReport ii_part1(const GroupSpec& G, const Subset& A, double k, double eps, const Subset& B,
                         const Subset& C, const SearchBudget& budget);

struct NearUniformityReport {
    double deviation = 0;            // ||A*B - 1||_k
    double eta = 0;                  // threshold for the contrapositive
    double perp_A = 1, perp_B = 1;
    bool perp_exhaustive = true;
    double r_required = 0;           // d^4 k^4 / eps^c
    int eps_exponent = 3;
    bool witness_needed = false;
    char witness_set = 0;            // 'A' or 'B'
    int k_prime = 0;
    double self_norm = 0;            // ||X⋆X||_{k'}
    std::optional<TheoremIIReport> witness;
    bool consistent = true;          // no uncertified witness was reported
    std::string note;
};
NearUniformityReport near_uniformity(const GroupSpec& G, const Subset& A, const Subset& B, int r, int k, double eps,
                                     const SearchBudget& budget, int eps_exponent = 3, double eta = -1);

struct SunflowerReport {
    IncrementTrace trace;
    Subset Aprime;
    AffineSubspace span;
    int r_formula = 0;
    int r_used = 0;
    bool r_capped = false;
    double k = 0;
    double divergence = 0;           // k-norm divergence of r_{A'} from uniform on 2 Span*(A')
    std::string divergence_pow_exact;  // divergence^k, integer k only
    double sumset_ratio = 0;         // |A'+A'| / |Span*(A')|
    bool density_no_loss = false;
    bool triple_sum_forced = false;  // divergence < 2^-d' (d' from A' in its span)
    bool triple_sum_is_span = false;
    double reference_codim = 0;      // d^5 k^4
    std::string note;
};
SunflowerReport robust_sunflower(const GroupSpec& G, const Subset& A, double eps, double k, double factor = 1,
                                 int eps_exponent = 3);

struct RothMeshulamReport {
    double max_coeff = 0;
    std::optional<double> perp1;     // prime vector spaces only
    std::optional<bool> bound1_holds;  // max <= 2 (perp1 - 1)
    double star = 0;                 // <A, B*C>
    double rhs_l2 = 0;               // max * ||B||_2 ||C||_2
    double rhs_d = 0;                // max * 2^d
    bool bound2_holds = false;
    bool bound2d_holds = false;
};
RothMeshulamReport roth_meshulam_stats(const GroupSpec& G, const Subset& A, const Subset& B, const Subset& C);

// (F_2^d minus 0) x F_2^(n-d) and {0} x F_2^(n-d).
std::pair<Subset, Subset> rm_counterexample(const GroupSpec& G, int d);
// (W u C) x F_2^(n-d) with W spanned by the first w unit vectors and C random of size c.
Subset planted_subspace(const GroupSpec& G, int d, int w, int c, uint64_t seed);

}  // namespace apc
