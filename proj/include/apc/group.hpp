#pragma once
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "apc/common.hpp"

namespace apc {

using Elem = std::vector<int>;
// Sorted element indices; the canonical set representation inside a group.
using Subset = std::vector<int>;

bool is_prime(long long n);

// Z_{N1} x ... x Z_{Nr}. Elements are indexed lexicographically on coordinates
// (last coordinate fastest).
class GroupSpec {
public:
    GroupSpec() = default;
    explicit GroupSpec(std::vector<int> moduli);

    const std::vector<int>& moduli() const { return moduli_; }
    int rank() const { return static_cast<int>(moduli_.size()); }
    int order() const { return order_; }
    bool is_prime_vector_space() const { return prime_space_; }
    int p() const { return moduli_.empty() ? 0 : moduli_[0]; }
    long long lcm() const { return lcm_; }

    int index(const Elem& x) const;
    Elem coords(int idx) const;
    int add(int a, int b) const { return add_tab_ ? (*add_tab_)[static_cast<size_t>(a) * order_ + b] : add_slow(a, b); }
    int neg(int a) const { return neg_[a]; }
    int sub(int a, int b) const { return add(a, neg_[b]); }
    int scale(int a, long long c) const;
    int zero() const { return 0; }
    bool valid(const Elem& x) const;
    std::string describe() const;

    // Exact phase numerator: e_alpha(x) = exp(2 pi i * phase / lcm).
    long long phase(int alpha, int x) const;

    bool operator==(const GroupSpec& o) const { return moduli_ == o.moduli_; }

private:
    int add_slow(int a, int b) const;
    std::vector<int> moduli_;
    std::vector<int> strides_;
    int order_ = 0;
    long long lcm_ = 1;
    bool prime_space_ = false;
    std::vector<int> neg_;
    std::shared_ptr<const std::vector<int>> add_tab_;  // shared so copies stay cheap
};

GroupSpec make_group(const std::vector<int>& moduli);

cd character_value(const GroupSpec& G, const Elem& alpha, const Elem& x);
cd character_value(const GroupSpec& G, int alpha, int x);
// |e_alpha(x) - 1| computed from the exact phase.
double char_dist(const GroupSpec& G, int alpha, int x);

// ---- linear algebra over F_p ----
using Mat = std::vector<std::vector<int>>;
// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(Mat& m, int p);
int rank_mod_p(Mat m, int p);
// Basis of {x : m x = 0}.
Mat kernel_basis(const Mat& m, int ncols, int p);
long long inv_mod(long long a, long long p);

class AffineSubspace {
public:
    AffineSubspace() = default;
    // Builds from a direction set (any spanning vectors) and a point.
    AffineSubspace(const GroupSpec& G, Mat directions, Elem point);
    // Builds from dual form {x : M x = b}; M need not be reduced.
    static AffineSubspace from_equations(const GroupSpec& G, const Mat& M, const std::vector<int>& b);

    const GroupSpec& group() const { return G_; }
    const Mat& basis() const { return basis_; }
    const Elem& shift() const { return shift_; }
    const Mat& dual() const { return dual_; }
    const std::vector<int>& rhs() const { return rhs_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    int codim() const { return G_.rank() - dim(); }
    long long size() const;
    bool contains(const Elem& x) const;
    bool contains(int idx) const { return contains(G_.coords(idx)); }
    Subset members() const;
    std::string describe() const;

private:
    void finish();
    GroupSpec G_;
    Mat basis_;
    Elem shift_;
    Mat dual_;
    std::vector<int> rhs_;
};

AffineSubspace span_affine(const GroupSpec& G, const Subset& points);

// Every affine subspace of codim <= max_codim, once each: by codim, then the
// RREF dual matrix, then the right-hand side.
void enumerate_affine_subspaces(const GroupSpec& G, int max_codim,
                                const std::function<void(const AffineSubspace&)>& visit);
// Enumerates full-rank RREF c x n matrices over F_p.
void enumerate_rref(int c, int n, int p, const std::function<void(const Mat&)>& visit);
long long count_affine_subspaces(int n, int p, int max_codim);

}  // namespace apc
