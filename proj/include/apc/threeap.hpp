#pragma once
#include <optional>
#include <string>
#include <vector>

#include "apc/bohr.hpp"
#include "apc/sifting.hpp"
#include "apc/spread.hpp"

namespace apc {

// A subset of the box [N_1] x ... x [N_r], coordinates 1-based.
struct Configuration {
    std::vector<long long> N;
    std::vector<Point> A;
    int rank() const { return static_cast<int>(N.size()); }
    long long volume() const;
    double density() const;
    double d() const;  // -lg density
};
Configuration make_configuration(std::vector<long long> N, std::vector<Point> A);
Configuration interval_configuration(long long N, const std::vector<long long>& A);

struct ApCount {
    long long total = 0;       // (x, y, z) with x + y = 2z
    long long trivial = 0;     // x = y = z
    long long nontrivial = 0;
};
ApCount count_3aps(const std::vector<long long>& A);
ApCount count_3aps(const std::vector<Point>& A);
ApCount count_3aps(const Configuration& cfg);
ApCount count_3aps(const GroupSpec& G, const Subset& A);

// Largest subset without nontrivial 3-APs, by branch and bound over elements in order.
int max_3ap_free_interval(int n);
int max_3ap_free_group(const GroupSpec& G);

struct BehrendReport {
    std::vector<long long> set;  // inside [N]
    int dim = 0, digits = 0;     // sphere in {0..digits-1}^dim, base 2*digits - 1
    long long radius2 = -1;      // -1: base-3 {0,1}-digit set
    double density = 0;
    bool certified = false;
};
BehrendReport behrend_set(long long N);
// Largest sphere shell alone; {1} when no shell fits.
BehrendReport behrend_sphere(long long N);

struct SpreadnessConfig {
    int c = 8;
    int K = 1;
    double eps = 1.0 / 1024;
};

// phi: Aprime[i] -> image[i], image inside [N'_1] x ... x [N'_r'].
struct GoodIncrement {
    std::vector<Point> Aprime;
    std::vector<Point> image;
    std::vector<long long> Nprime;
};

struct IncrementCheck {
    bool well_formed = false;
    std::string malformed;
    FreimanCert hom;
    double density_before = 0, density_after = 0;
    bool density_ok = false;
    int r_prime = 0;
    double r_bound = 0;
    bool rank_ok = false;
    double lg_size = 0, lg_size_bound = 0;
    bool size_ok = false;
    ApCount count_source, count_image;
    bool monotone = false;     // count(phi(A')) <= count(A')
    bool verified = false;
};
IncrementCheck is_good_increment(const Configuration& cfg, const GoodIncrement& cand, const SpreadnessConfig& sc);

struct NiceCheck {
    bool primes = false;           // distinct odd primes
    bool upper = false;            // A inside prod [2 delta N_i, N_i]
    double middle_density = 0;     // E 1_A(v + b - b')
    bool middle = false;           // >= mu/2
    long long max_rep = 0;         // max_{z in A} R_A(2z)
    double rep_cap = 0;            // mu |A| / 4
    bool reps = false;
    bool widths_ok = false;        // every m_i >= 1
    bool nice = false;
    std::vector<long long> v, m;
};
NiceCheck check_nice(const Configuration& cfg, double delta);

enum class NiceBranch { Nice, ManyAPs, Increment };

struct MakeNiceResult {
    NiceBranch branch = NiceBranch::Nice;
    double eps = 0, delta = 0;
    int n0 = 0;
    std::vector<int> fixed_coords;      // coordinates removed by fixing
    std::vector<long long> primes;
    long long pruned = 0;               // points removed by the representation cap
    long long translates = 0;
    bool exhaustive = true;
    std::vector<long long> a;           // chosen translate
    double mu1 = 0, mu2 = 0;
    // Nice
    Configuration nice;
    std::vector<Point> source;          // original points, parallel to nice.A
    NiceCheck check;
    double density_ratio = 0;           // mu'' / mu
    bool density_ok = false;            // >= 1 - 5 eps
    // ManyAPs
    ApCount count;
    double many_threshold = 0;          // (eps/16) mu'' |A| |A''|
    bool many_ok = false;
    // Increment
    GoodIncrement increment;
    IncrementCheck increment_check;
    std::string increment_kind;         // "upper" or "middle"
    bool certified = false;
    std::string note;
};
MakeNiceResult make_nice(const Configuration& cfg, double eps, const SpreadnessConfig& sc, uint64_t seed = 0,
                         long long scan_cap = 1000000);

struct EmbedReport {
    GroupSpec G;                   // Z_M, M = prod p_i (CRT)
    std::vector<long long> primes;
    Subset image;                  // phi(A), parallel to cfg.A
    BohrSet B;
    Subset B_members;
    Subset box_members;            // {2 phi(b) : b in C_m}
    bool bohr_exact = false;       // Bohr(Gamma, rho) equals the box image
    int k = 0;
    double norm = 0;               // ||phi(A) * phi(A)||_{k, B*B}
    double margin = 0;             // norm - 1
    bool margin_ok = false;        // >= 1/4
    double centered_norm = 0;      // ||phi(A)*phi(A) - 1||_{k, T(B*B)}
    bool centered_ok = false;      // >= 1/2
    bool regular = false;
    bool safe = false;
    long long safe_translates = 0;
    std::string note;
};
long long crt_index(const std::vector<long long>& p, const Point& x);
EmbedReport embed_nice(const Configuration& cfg, double delta);

struct SchoenSisaskReport {
    BohrSet Bprime;
    Subset members;
    double base_value = 0;         // ((X*Y) star f)(0)
    double max_deviation = 0;
    bool certified = false;
    double d = 0, s = 0;           // lg |Y+B|/|Y|, lg |X+Y+B|/|X|
    double rank_shape = 0;         // r + d s^3/eps^2 + d s log(1/eps)^2/eps^2
    double radius_shape = 0;       // rho eps 2^(-s/2) / (r^2 r')
    int rounds = 0;
    std::string note;
};
SchoenSisaskReport schoen_sisask_search(const GroupSpec& G, const Subset& X, const Subset& Y, const BohrSet& B,
                                        const RealFn& f, double eps, int max_rounds = 64);

struct SvrReport {
    bool certified = false;
    std::string failed_stage;
    std::vector<StageRecord> stages;
    double delta = 0, eta = 0;
    int theta = 0;
    int k_witness = 0;
    int k_witness_bound = 0;
    Subset X, Y;
    SchoenSisaskReport ss;
    Progression P;                 // inside B'
    Progression Pfinal;            // P'' = a - (P + z)
    Rational final_value;          // <P'', A>
    double final_double = 0;
    bool final_proper = false;
    bool final_in_translate = false;
    double size_shape = 0;
    std::string note;
};
SvrReport svr_local(const GroupSpec& G, const Subset& A, const BohrSet& B, int k, double eps0,
                    const SearchBudget& budget);

struct TraceRecord {
    std::string stage;
    std::string inputs_hash;
    std::string certificate;
    double achieved = 0;
    std::string bound_shape;
    double wallclock = 0;
};

struct SpreadPipelineReport {
    std::vector<long long> Aprime;           // original integers that survive
    Configuration final_cfg;
    std::vector<TraceRecord> trace;
    int iterations = 0;
    int iteration_bound = 0;                 // ceil(d/eps)
    bool within_bound = true;
    std::string stop_reason;
    bool composition_hom = false;            // composed map checked as a 2-homomorphism
};
SpreadPipelineReport pass_to_spread(long long N, const std::vector<long long>& A, const SpreadnessConfig& sc,
                                    uint64_t seed, const SearchBudget& budget, int max_iterations = 16,
                                    double nice_eps = 1.0 / 512);

}  // namespace apc
