#pragma once
#include <optional>
#include <string>
#include <vector>

#include "apc/harmonic.hpp"

namespace apc {

enum class SearchMode { Exhaustive, Sampled };

struct SearchBudget {
    SearchMode mode = SearchMode::Exhaustive;
    long long samples = 2000;
    uint64_t seed = 0;
    bool best = false;            // exhaustive: scan everything, keep the minimum ratio
    long long node_cap = -1;      // -1: use search_budget()
};

struct SiftOutcome {
    std::string variant;
    std::vector<int> shifts;                 // element indices in the working group
    std::vector<Subset> sets;                // A' (self), A',B' (pair), B',C' (local)
    double achieved_ratio = 0;
    std::string achieved_ratio_exact;
    std::vector<long long> achieved_sizes;
    double guarantee_ratio = 0;
    std::string guarantee_ratio_exact;
    std::vector<double> guarantee_sizes;     // lower bounds, same order as sets (local: product)
    bool certified = false;
    bool vacuous = false;
    bool budget_exhausted = false;
    long long nodes = 0;
    long long tried = 0;
    long long successes = 0;                 // sampled mode: certified draws
    std::string note;
};

struct PigeonholeParams {
    double H = 0, tau = 0;
    std::vector<int> I;
};
// Returns an index satisfying the chosen variant ("i", "ii", "iii", "iv").
int weighted_pigeonhole(const std::vector<double>& g, const std::vector<double>& h, const std::string& variant,
                        const PigeonholeParams& params = {});

SiftOutcome sift_self(const GroupSpec& G, const Subset& A, const RealFn& f, int k, const SearchBudget& budget);
SiftOutcome sift_pair(const GroupSpec& G, const Subset& A, const Subset& B, const RealFn& f, int k,
                      const SearchBudget& budget);
SiftOutcome sift_local(const GroupSpec& G, const Subset& A, const Subset& B, const Subset& C, const RealFn& f,
                       int k, const SearchBudget& budget);

struct RobustWitness {
    SiftOutcome outcome;
    Subset S;                  // {A⋆A <= 1 + eps/2}
    int k_used = 0;            // the corollary's k'
    double eps_bar = 0;
    double witness_mass = 0;   // <A'⋆A', 1_S>
    bool corollary_certified = false;
    double chain_value = 0;    // <A'⋆A', A⋆A>
    bool chain_holds = false;
    std::string note;
};
RobustWitness sift_robust_witness(const GroupSpec& G, const Subset& A, double k, double eps,
                                  const SearchBudget& budget);
int robust_witness_k(double k, double eps);

struct LocalWitness {
    SiftOutcome outcome;
    Subset f_support;          // {A⋆A <= 1 + eps}
    double hypothesis_norm = 0;
    double corollary_ratio_bound = 0;   // 2((1+eps)/(1+2eps))^k'
    double corollary_ratio_simple = 0;  // 2 * 2^(-eps k'/2)
    double size_ratio = 0;              // |B'||C'|/(|B||C|)
    double size_ratio_bound = 0;        // 1/2 * 2^(-2 d k')
    bool corollary_certified = false;
};
LocalWitness sift_local_witness(const GroupSpec& G, const Subset& A, const Subset& B, const Subset& C, int k,
                                double eps, int kprime, const SearchBudget& budget);

struct PreBsgOutcome {
    SiftOutcome outcome;
    std::string kappa_exact;
    double kappa = 0;
    double ratio_bound = 0;   // 2 c^(k-1)
    double size_bound = 0;    // kappa |A| / 2
    std::vector<long long> subset_z;  // A' back in Z (when the input lives in Z)
    std::vector<long long> shifts_z;
    bool certified = false;
};
PreBsgOutcome extended_pre_bsg(const std::vector<long long>& A, int k, double c, const SearchBudget& budget);
PreBsgOutcome extended_pre_bsg(const GroupSpec& G, const Subset& A, int k, double c, const SearchBudget& budget);

// Exact checks of R_A^-(x)^k = sum_s R^-_{A'(s)}(x) and sum_s |A'(s)| = |A|^k over all s in G^(k-1).
bool power_identity_holds(const GroupSpec& G, const Subset& A, int k);

// Guarantee values in both normalisations (counting vs density); used by tests.
struct SiftGuarantees {
    Rational counting_size;   // 1/2 sum R^k / |A|^k
    double density_size;      // 1/2 delta^k ||A⋆A||_k^k |G|
};
SiftGuarantees self_guarantees(const GroupSpec& G, const Subset& A, int k);

}  // namespace apc
