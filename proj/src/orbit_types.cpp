#include "eqdeg/orbit_types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace eqdeg {

namespace {

// Lattice member: a subspace with both layers when exact.
struct LatticeSubspace {
    SubspaceBasis basis;
};

bool same_subspace(const SubspaceBasis& a, const SubspaceBasis& b, double tol) {
    if (a.dim() != b.dim()) return false;
    if (a.exact && b.exact) return a.proj_exact == b.proj_exact;
    return (a.proj - b.proj).cwiseAbs().maxCoeff() <= tol;
}

SubspaceBasis intersect_subspaces(const FiniteGroup& g, const SubspaceBasis& a,
                                  const SubspaceBasis& b) {
    const int n = g.dim();
    if (g.exact() && a.exact && b.exact) {
        // x in both spaces iff (I - Pa) x = 0 and (I - Pb) x = 0
        RatMat stacked(2 * n, n);
        RatMat ia = RatMat::identity(n) - a.proj_exact;
        RatMat ib = RatMat::identity(n) - b.proj_exact;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                stacked(i, j) = ia(i, j);
                stacked(n + i, j) = ib(i, j);
            }
        return make_subspace_exact(n, kernel(stacked));
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(a.proj + b.proj);
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 2.0 - 1e-6) ++k;
    return make_subspace_double(n, es.eigenvectors().rightCols(k));
}

/// Pointwise stabilizer {g : g|_W = id}.
Subgroup pointwise_stabilizer(const FiniteGroup& g, const SubspaceBasis& w) {
    Subgroup s;
    for (int e = 0; e < g.order(); ++e) {
        bool fixes;
        if (g.exact() && w.exact)
            fixes = (*g.element(e).exact * w.raw) == w.raw;
        else
            fixes = w.dim() == 0 ||
                    (g.mat(e) * w.q - w.q).cwiseAbs().maxCoeff() <= g.tol();
        if (fixes) s.members.push_back(e);
    }
    return s;
}

std::vector<LatticeSubspace> build_lattice(const FiniteGroup& g, double tol) {
    std::vector<LatticeSubspace> lattice;
    auto add = [&](SubspaceBasis b) {
        for (const auto& l : lattice)
            if (same_subspace(l.basis, b, tol)) return false;
        lattice.push_back({std::move(b)});
        return true;
    };

    for (int e = 0; e < g.order(); ++e)
        add(fixed_subspace(g, g.generated_subgroup({e})));

    // close under pairwise intersection
    for (size_t i = 0; i < lattice.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            add(intersect_subspaces(g, lattice[i].basis, lattice[j].basis));
    return lattice;
}

/// Search V^H cap Omega for a point clear of every strictly smaller lattice
/// subspace and with isotropy exactly h. Deterministic lexicographic grid
/// scan with refinement.
bool sample_stratum(const FiniteGroup& g, const InvariantDomain& omega,
                    const Subgroup& h, const SubspaceBasis& vh,
                    const std::vector<Mat>& walls, double tol, Vec& witness) {
    const int k = vh.dim();
    if (k == 0) {
        Vec origin = Vec::Zero(g.dim());
        if (!omega.contains(origin)) return false;
        witness = origin;
        return true; // isotropy of the origin is all of G = h
    }

    Box bbox = omega.bounding_box();
    double radius = 0;
    for (const auto& s : bbox.sides)
        radius += std::max(s.lo * s.lo, s.hi * s.hi);
    radius = std::sqrt(radius);

    double step = std::max(omega.min_feature() / 4.0, radius / 64.0);
    const double wall_clear = 1e-6;

    for (int level = 0; level < 5; ++level, step /= 2) {
        int m = int(std::floor(radius / step));
        std::vector<int> idx(k, -m);
        while (true) {
            Vec u(k);
            for (int i = 0; i < k; ++i) u(i) = (idx[i] + 0.5) * step;
            Vec x = vh.q * u;
            bool ok = omega.contains(x);
            for (size_t w = 0; ok && w < walls.size(); ++w)
                if ((x - walls[w] * x).norm() <= wall_clear) ok = false;
            if (ok) {
                try {
                    ok = isotropy_group(g, x, tol) == h;
                } catch (const AmbiguousIsotropy&) {
                    ok = false;
                }
            }
            if (ok) {
                witness = x;
                return true;
            }
            // advance multi-index
            int axis = 0;
            while (axis < k && ++idx[axis] > m) idx[axis++] = -m;
            if (axis == k) break;
        }
    }
    return false;
}

struct Candidate {
    Subgroup h;
    SubspaceBasis vh;
    bool realized = false;
    Vec witness;
};

} // namespace

int OrbitTypeTable::entry_of(const FiniteGroup& g, const Subgroup& h) const {
    for (size_t i = 0; i < entries.size(); ++i)
        if (g.are_conjugate(entries[i].rep, h)) return int(i);
    return -1;
}

OrbitTypeTable isotropy_types(const FiniteGroup& g, const InvariantDomain& omega,
                              const Tolerances& tol) {
    if (omega.empty()) throw EmptyDomain("isotropy_types: empty domain");

    auto lattice = build_lattice(g, tol.tol_group);

    // candidate isotropy groups: pointwise stabilizers of lattice members
    std::vector<Candidate> candidates;
    for (const auto& l : lattice) {
        Subgroup h = pointwise_stabilizer(g, l.basis);
        bool dup = false;
        for (const auto& c : candidates)
            if (c.h == h) { dup = true; break; }
        if (dup) continue;
        Candidate c;
        c.h = std::move(h);
        c.vh = fixed_subspace(g, c.h);
        candidates.push_back(std::move(c));
    }

    // realized-check each candidate on its own fixed space
    for (auto& c : candidates) {
        std::vector<Mat> walls;
        for (const auto& l : lattice)
            if (!l.basis.contains_subspace(c.vh, tol.tol_group))
                walls.push_back(l.basis.proj);
        c.realized = sample_stratum(g, omega, c.h, c.vh, walls, tol.tol_group, c.witness);
    }

    // merge by conjugacy; a class is realized if any member is
    std::vector<bool> used(candidates.size(), false);
    OrbitTypeTable table;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (used[i]) continue;
        std::vector<size_t> cls{i};
        used[i] = true;
        for (size_t j = i + 1; j < candidates.size(); ++j)
            if (!used[j] && g.are_conjugate(candidates[i].h, candidates[j].h)) {
                used[j] = true;
                cls.push_back(j);
            }
        bool realized = false;
        size_t realized_member = 0;
        for (size_t j : cls)
            if (candidates[j].realized) { realized = true; realized_member = j; break; }
        if (!realized) continue;

        // representative: lexicographically least member set over all conjugates
        std::set<Subgroup> conjugates;
        for (int e = 0; e < g.order(); ++e)
            conjugates.insert(g.conjugate_subgroup(candidates[cls[0]].h, e));
        OrbitTypeEntry entry;
        entry.rep = *conjugates.begin();
        entry.conjugates.assign(conjugates.begin(), conjugates.end());
        entry.fixed = fixed_subspace(g, entry.rep);
        entry.weyl = weyl_group(g, entry.rep, entry.fixed);

        // move the sampled witness into the representative's stratum
        const Candidate& src = candidates[realized_member];
        int mover = 0;
        for (int e = 0; e < g.order(); ++e)
            if (g.conjugate_subgroup(entry.rep, e) == src.h) { mover = e; break; }
        entry.witness = g.mat(g.inv(mover)) * src.witness;

        for (const auto& conj : entry.conjugates) {
            Mat p = fixed_subspace(g, conj).proj;
            bool dup = false;
            for (const auto& q : entry.conjugate_projectors)
                if ((q - p).cwiseAbs().maxCoeff() <= tol.tol_group) { dup = true; break; }
            if (!dup) entry.conjugate_projectors.push_back(std::move(p));
        }

        // sampled freeness of the Weyl action at the witness
        for (size_t r = 1; r < entry.weyl.coset_reps.size(); ++r)
            if ((g.mat(entry.weyl.coset_reps[r]) * entry.witness - entry.witness).norm() <=
                10 * tol.tol_group)
                throw Error("Weyl action not free at sampled stratum point (internal)");

        table.entries.push_back(std::move(entry));
    }

    if (table.entries.empty())
        throw Error("no realized orbit types found; domain may be too thin for sampling");

    std::sort(table.entries.begin(), table.entries.end(),
              [](const OrbitTypeEntry& a, const OrbitTypeEntry& b) {
                  if (a.rep.order() != b.rep.order()) return a.rep.order() > b.rep.order();
                  return a.rep.members < b.rep.members;
              });

    for (size_t i = 0; i < table.entries.size(); ++i)
        for (size_t j = 0; j < table.entries.size(); ++j)
            if (i != j && g.subconjugate(table.entries[i].rep, table.entries[j].rep))
                table.order_relation.emplace_back(int(i), int(j));

    for (const auto& l : lattice) table.lattice_projectors.push_back(l.basis.proj);
    return table;
}

} // namespace eqdeg
