#pragma once

// Orbit-type stratification of a domain: which conjugacy classes of isotropy
// subgroups actually occur, with their fixed subspaces and Weyl data.
//
// Algorithm: collect the fixed subspaces V^<g> of all elements, close the
// collection under pairwise intersection, take pointwise stabilizers of the
// lattice members as candidate isotropy groups, and keep a candidate iff a
// grid sample of its fixed space hits the domain while avoiding every
// strictly smaller lattice subspace (such a point has isotropy exactly the
// candidate). Candidates are finally merged by conjugacy.

#include "eqdeg/domain.hpp"
#include "eqdeg/group.hpp"

namespace eqdeg {

struct OrbitTypeEntry {
    Subgroup rep;                    // lexicographically least conjugate
    SubspaceBasis fixed;             // V^rep
    WeylData weyl;
    std::vector<Subgroup> conjugates;
    std::vector<Mat> conjugate_projectors; // projectors onto g V^rep over distinct conjugates
    Vec witness;                     // a sampled point with isotropy exactly rep
};

struct OrbitTypeTable {
    std::vector<OrbitTypeEntry> entries;
    /// Strict pairs (i, j), i != j, meaning (H_i) <= (H_j).
    std::vector<std::pair<int, int>> order_relation;
    /// All distinct lattice subspaces (projectors), for wall computations.
    std::vector<Mat> lattice_projectors;

    /// Entry whose conjugacy class contains h, or -1.
    int entry_of(const FiniteGroup& g, const Subgroup& h) const;
};

OrbitTypeTable isotropy_types(const FiniteGroup& g, const InvariantDomain& omega,
                              const Tolerances& tol);

} // namespace eqdeg
