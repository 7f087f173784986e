#include "eqdeg/group.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace eqdeg {

OrthoMatrix OrthoMatrix::from_exact(RatMat r) {
    OrthoMatrix o;
    o.m.resize(r.rows(), r.cols());
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) o.m(i, j) = rat_to_double(r(i, j));
    o.exact = std::move(r);
    return o;
}

OrthoMatrix OrthoMatrix::from_double(Mat d) {
    OrthoMatrix o;
    o.m = std::move(d);
    return o;
}

bool Subgroup::contains(int g) const {
    return std::binary_search(members.begin(), members.end(), g);
}

namespace {

bool orthogonal_exact(const RatMat& m) {
    return (m.transposed() * m).is_identity();
}

bool orthogonal_double(const Mat& m, double tol) {
    return (m.transpose() * m - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

} // namespace

int FiniteGroup::find_element(const OrthoMatrix& c) const {
    if (exact_) {
        auto it = exact_index_.find(c.exact->key());
        return it == exact_index_.end() ? -1 : it->second;
    }
    for (int i = 0; i < order(); ++i)
        if ((elements_[i].m - c.m).cwiseAbs().maxCoeff() <= tol_) return i;
    return -1;
}

void FiniteGroup::push_element(OrthoMatrix m) {
    if (exact_) exact_index_.emplace(m.exact->key(), int(elements_.size()));
    elements_.push_back(std::move(m));
}

FiniteGroup FiniteGroup::close_generators(const std::vector<OrthoMatrix>& gens, int cap,
                                          double tol_group) {
    if (gens.empty()) throw Error("close_generators: no generators");
    const int n = gens[0].dim();

    FiniteGroup g;
    g.dim_ = n;
    g.tol_ = tol_group;
    g.exact_ = std::all_of(gens.begin(), gens.end(),
                           [](const OrthoMatrix& m) { return m.exact.has_value(); });

    for (const auto& gen : gens) {
        if (gen.dim() != n)
            throw DimensionMismatch("generators have mixed dimensions");
        bool ok = g.exact_ ? orthogonal_exact(*gen.exact) : orthogonal_double(gen.m, tol_group);
        if (!ok) throw NotOrthogonal("generator is not orthogonal");
    }

    OrthoMatrix id = g.exact_ ? OrthoMatrix::from_exact(RatMat::identity(n))
                              : OrthoMatrix::from_double(Mat::Identity(n, n));
    g.push_element(std::move(id));

    // breadth-first: layer by layer, element order then generator order
    size_t frontier_begin = 0;
    while (frontier_begin < g.elements_.size()) {
        size_t frontier_end = g.elements_.size();
        for (size_t e = frontier_begin; e < frontier_end; ++e) {
            for (const auto& gen : gens) {
                OrthoMatrix prod;
                if (g.exact_)
                    prod = OrthoMatrix::from_exact(*g.elements_[e].exact * *gen.exact);
                else
                    prod = OrthoMatrix::from_double(g.elements_[e].m * gen.m);
                if (g.find_element(prod) < 0) {
                    if (int(g.elements_.size()) >= cap)
                        throw CapExceeded("group closure exceeds cap " + std::to_string(cap));
                    g.push_element(std::move(prod));
                }
            }
        }
        frontier_begin = frontier_end;
    }

    for (const auto& gen : gens) g.generator_ids_.push_back(g.find_element(gen));

    const int ord = g.order();
    g.cayley_.assign(size_t(ord) * ord, -1);
    g.inverse_.assign(ord, -1);
    for (int a = 0; a < ord; ++a) {
        for (int b = 0; b < ord; ++b) {
            OrthoMatrix prod;
            if (g.exact_)
                prod = OrthoMatrix::from_exact(*g.elements_[a].exact * *g.elements_[b].exact);
            else
                prod = OrthoMatrix::from_double(g.elements_[a].m * g.elements_[b].m);
            int idx = g.find_element(prod);
            if (idx < 0) throw Error("Cayley table not closed (tolerance too tight?)");
            g.cayley_[size_t(a) * ord + b] = idx;
            if (idx == 0) g.inverse_[a] = b;
        }
    }
    return g;
}

Subgroup FiniteGroup::full_subgroup() const {
    Subgroup s;
    s.members.resize(order());
    for (int i = 0; i < order(); ++i) s.members[i] = i;
    return s;
}

Subgroup FiniteGroup::generated_subgroup(const std::vector<int>& gens) const {
    std::set<int> seen{0};
    std::vector<int> todo{0};
    for (int g : gens)
        if (seen.insert(g).second) todo.push_back(g);
    for (size_t i = 0; i < todo.size(); ++i)
        for (int g : gens) {
            int p = mul(todo[i], g);
            if (seen.insert(p).second) todo.push_back(p);
        }
    Subgroup s;
    s.members.assign(seen.begin(), seen.end());
    return s;
}

Subgroup FiniteGroup::conjugate_subgroup(const Subgroup& h, int g) const {
    Subgroup c;
    c.members.reserve(h.members.size());
    int gi = inv(g);
    for (int m : h.members) c.members.push_back(mul(mul(g, m), gi));
    std::sort(c.members.begin(), c.members.end());
    return c;
}

bool FiniteGroup::are_conjugate(const Subgroup& a, const Subgroup& b) const {
    if (a.members.size() != b.members.size()) return false;
    for (int g = 0; g < order(); ++g)
        if (conjugate_subgroup(a, g) == b) return true;
    return false;
}

bool FiniteGroup::subconjugate(const Subgroup& a, const Subgroup& b) const {
    if (a.members.size() > b.members.size()) return false;
    for (int g = 0; g < order(); ++g) {
        Subgroup c = conjugate_subgroup(a, g);
        if (std::includes(b.members.begin(), b.members.end(), c.members.begin(),
                          c.members.end()))
            return true;
    }
    return false;
}

Subgroup normalizer(const FiniteGroup& g, const Subgroup& h) {
    Subgroup n;
    for (int e = 0; e < g.order(); ++e)
        if (g.conjugate_subgroup(h, e) == h) n.members.push_back(e);
    return n;
}

bool SubspaceBasis::contains_subspace(const SubspaceBasis& o, double tol) const {
    if (exact && o.exact) return (proj_exact * o.proj_exact) == o.proj_exact;
    return (proj * o.proj - o.proj).cwiseAbs().maxCoeff() <= tol;
}

SubspaceBasis make_subspace_exact(int ambient, const RatMat& spanning) {
    SubspaceBasis s;
    s.ambient = ambient;
    s.exact = true;
    s.raw = orthogonalize_columns(column_space(spanning));
    s.proj_exact = projector_onto(s.raw);

    // exact normalization when every norm^2 is a perfect square
    s.ortho_exact = true;
    std::vector<Rat> inv_norms;
    for (int j = 0; j < s.raw.cols(); ++j) {
        auto r = rat_exact_sqrt(dot(s.raw.col(j), s.raw.col(j)));
        if (!r) { s.ortho_exact = false; break; }
        inv_norms.push_back(Rat(1) / *r);
    }

    s.q.resize(ambient, s.raw.cols());
    for (int j = 0; j < s.raw.cols(); ++j) {
        if (s.ortho_exact) {
            for (int i = 0; i < ambient; ++i)
                s.q(i, j) = rat_to_double(s.raw(i, j) * inv_norms[j]);
        } else {
            Vec v(ambient);
            for (int i = 0; i < ambient; ++i) v(i) = rat_to_double(s.raw(i, j));
            s.q.col(j) = v / v.norm();
        }
    }
    s.proj.resize(ambient, ambient);
    for (int i = 0; i < ambient; ++i)
        for (int j = 0; j < ambient; ++j) s.proj(i, j) = rat_to_double(s.proj_exact(i, j));
    return s;
}

SubspaceBasis make_subspace_double(int ambient, const Mat& orthonormal) {
    SubspaceBasis s;
    s.ambient = ambient;
    s.q = orthonormal;
    s.proj = s.q * s.q.transpose();
    return s;
}

SubspaceBasis fixed_subspace(const FiniteGroup& g, const Subgroup& h) {
    const int n = g.dim();

    if (g.exact()) {
        RatMat avg(n, n);
        for (int m : h.members) avg = avg + *g.element(m).exact;
        avg = avg * Rat(1, h.order());
        return make_subspace_exact(n, avg);
    }

    Mat avg = Mat::Zero(n, n);
    for (int m : h.members) avg += g.mat(m);
    avg /= double(h.order());

    Eigen::SelfAdjointEigenSolver<Mat> es((avg + avg.transpose()) / 2.0);
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 1.0 - 1e-6) ++k;
    return make_subspace_double(n, es.eigenvectors().rightCols(k));
}

WeylData weyl_group(const FiniteGroup& g, const Subgroup& h, const SubspaceBasis& fixed) {
    WeylData w;
    w.h = h;
    w.nh = normalizer(g, h);

    // greedy coset decomposition of NH by H, least representative first
    std::set<int> assigned;
    for (int e : w.nh.members) {
        if (assigned.count(e)) continue;
        w.coset_reps.push_back(e);
        for (int m : h.members) assigned.insert(g.mul(e, m));
    }
    if (int(w.nh.members.size()) != int(w.coset_reps.size()) * h.order())
        throw Error("coset decomposition size mismatch");

    for (int rep : w.coset_reps)
        w.action_on_fixed.push_back(fixed.q.transpose() * g.mat(rep) * fixed.q);
    return w;
}

WeylData weyl_group(const FiniteGroup& g, const Subgroup& h) {
    return weyl_group(g, h, fixed_subspace(g, h));
}

Subgroup isotropy_group(const FiniteGroup& g, const Vec& x, double tol) {
    Subgroup s;
    for (int e = 0; e < g.order(); ++e) {
        double d = (g.mat(e) * x - x).norm();
        if (d <= tol) {
            s.members.push_back(e);
        } else if (d <= 10 * tol) {
            std::ostringstream os;
            os << "isotropy defect " << d << " in (" << tol << ", " << 10 * tol
               << "]: point too close to a stratum wall";
            throw AmbiguousIsotropy(os.str());
        }
    }
    // the tol-set must already be a subgroup
    for (int a : s.members)
        for (int b : s.members)
            if (!s.contains(g.mul(a, b)))
                throw AmbiguousIsotropy("tolerance set not closed under the group operation");
    return s;
}

Subgroup isotropy_group_exact(const FiniteGroup& g, const std::vector<Rat>& x) {
    const int n = g.dim();
    Subgroup s;
    for (int e = 0; e < g.order(); ++e) {
        const RatMat& m = *g.element(e).exact;
        bool fixes = true;
        for (int i = 0; i < n && fixes; ++i) {
            Rat yi = 0;
            for (int j = 0; j < n; ++j) yi += m(i, j) * x[j];
            fixes = (yi == x[i]);
        }
        if (fixes) s.members.push_back(e);
    }
    return s; // exact fixed-sets are automatically subgroups
}

} // namespace eqdeg
