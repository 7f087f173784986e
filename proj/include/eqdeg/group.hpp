#pragma once

// Finite orthogonal matrix groups: closure from generators, Cayley table,
// subgroups, normalizers, Weyl groups and fixed subspaces. Everything is
// computed exactly when the generators have rational entries, and with
// tolerance tol_group otherwise.

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <vector>

#include "eqdeg/rational.hpp"

namespace eqdeg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Tolerances {
    double tol_group = 1e-9;
    double tol_equiv = 1e-9;
    double eta_reg = 1e-8;
    double eta_loc = 1e-6;
    double r_dedup = 1e-6;
    double orbit_tol = 1e-6;
    double delta = 0;  // 0 = auto: smallest domain feature / 16
    double margin = 0; // 0 = auto: smallest domain feature / 10
    int max_group_order = 4096;
    int t_samples = 11;
    unsigned long long seed = 0;
};

/// Orthogonal matrix, optionally carrying an exact rational form.
struct OrthoMatrix {
    Mat m;
    std::optional<RatMat> exact;

    int dim() const { return int(m.rows()); }
    static OrthoMatrix from_exact(RatMat r);
    static OrthoMatrix from_double(Mat d);
};

/// Sorted element-index set, closed under the group operations.
struct Subgroup {
    std::vector<int> members;

    int order() const { return int(members.size()); }
    bool contains(int g) const;
    bool operator==(const Subgroup& o) const { return members == o.members; }
    bool operator<(const Subgroup& o) const { return members < o.members; }
};

class FiniteGroup {
public:
    /// BFS closure of the generators; deterministic element order with the
    /// identity at index 0. Throws CapExceeded / NotOrthogonal.
    static FiniteGroup close_generators(const std::vector<OrthoMatrix>& gens, int cap,
                                        double tol_group = 1e-9);

    int order() const { return int(elements_.size()); }
    int dim() const { return dim_; }
    bool exact() const { return exact_; }
    double tol() const { return tol_; }

    const OrthoMatrix& element(int i) const { return elements_[i]; }
    const Mat& mat(int i) const { return elements_[i].m; }

    int mul(int a, int b) const { return cayley_[size_t(a) * order() + b]; }
    int inv(int a) const { return inverse_[a]; }

    /// Indices of the original generators among the elements.
    const std::vector<int>& generator_ids() const { return generator_ids_; }

    Subgroup full_subgroup() const;
    Subgroup trivial_subgroup() const { return Subgroup{{0}}; }

    /// Subgroup generated by the given element indices.
    Subgroup generated_subgroup(const std::vector<int>& gens) const;

    Subgroup conjugate_subgroup(const Subgroup& h, int g) const;
    bool are_conjugate(const Subgroup& a, const Subgroup& b) const;
    /// (a) <= (b): a conjugate to a subgroup of b.
    bool subconjugate(const Subgroup& a, const Subgroup& b) const;

private:
    int dim_ = 0;
    bool exact_ = false;
    double tol_ = 1e-9;
    std::vector<OrthoMatrix> elements_;
    std::vector<int> cayley_;
    std::vector<int> inverse_;
    std::vector<int> generator_ids_;
    std::map<std::string, int> exact_index_; // key -> element id (exact groups)

    int find_element(const OrthoMatrix& m) const; // -1 if absent
    void push_element(OrthoMatrix m);
};

/// Basis data for a linear subspace W of R^n.
///
/// q holds orthonormal columns in double precision. When the group is exact
/// the rational layer keeps an orthogonal (unnormalized) basis and the exact
/// projector; q itself is exact iff every Gram-Schmidt norm^2 was a perfect
/// rational square (ortho_exact).
struct SubspaceBasis {
    int ambient = 0;
    Mat q;       // n x k, orthonormal
    Mat proj;    // n x n projector
    bool exact = false;
    bool ortho_exact = false;
    RatMat raw;        // n x k rational orthogonal basis (exact only)
    RatMat proj_exact; // n x n rational projector (exact only)

    int dim() const { return int(q.cols()); }
    /// Euclidean distance from x to the subspace.
    double distance(const Vec& x) const { return (x - proj * x).norm(); }
    /// true if this subspace contains the other one.
    bool contains_subspace(const SubspaceBasis& o, double tol) const;
};

struct WeylData {
    Subgroup h;
    Subgroup nh;
    std::vector<int> coset_reps;        // element ids, identity coset first
    std::vector<Mat> action_on_fixed;   // k x k, one per coset rep
    int order() const { return int(coset_reps.size()); }
};

/// Build SubspaceBasis from rational spanning columns (need not be independent).
SubspaceBasis make_subspace_exact(int ambient, const RatMat& spanning);

/// Build SubspaceBasis from orthonormal double columns.
SubspaceBasis make_subspace_double(int ambient, const Mat& orthonormal);

Subgroup normalizer(const FiniteGroup& g, const Subgroup& h);

/// Fixed subspace V^H via the averaging projector (1/|H|) sum_h h.
SubspaceBasis fixed_subspace(const FiniteGroup& g, const Subgroup& h);

WeylData weyl_group(const FiniteGroup& g, const Subgroup& h, const SubspaceBasis& fixed);
WeylData weyl_group(const FiniteGroup& g, const Subgroup& h);

/// {g : ||gx - x|| <= tol}. Throws AmbiguousIsotropy if some defect falls in
/// (tol, 10 tol] or the tol-set fails to be a subgroup.
Subgroup isotropy_group(const FiniteGroup& g, const Vec& x, double tol);

/// Exact variant used when the group is rational.
Subgroup isotropy_group_exact(const FiniteGroup& g, const std::vector<Rat>& x);

} // namespace eqdeg
