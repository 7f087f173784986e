#pragma once

// Constructive realization of degree vectors: place standard atoms at chart
// witnesses, |m| per key with the prescribed sign, with pairwise disjoint
// saturated supports. Also the linearization of a map at a regular zero,
// with the straight-line path back to the map.

#include "eqdeg/degree.hpp"

namespace eqdeg {

/// One atom of the given sign at a chart witness of (entry, component).
/// Throws NoRoom when no admissible radius >= 1e-4 exists.
StandardAtom standard_atom(const AnalysisContext& ctx, int entry, int component, int sign);

/// Atom with explicitly given placement (deserialization path); validates
/// center isotropy, component id and the radius invariants.
StandardAtom atom_at(const AnalysisContext& ctx, int entry, int component, int sign,
                     const Vec& center, const std::vector<Rat>& center_exact,
                     const Rat& radius);

EquivariantLocalMap disjoint_union(const EquivariantLocalMap& f, const EquivariantLocalMap& g);

/// Map with equivariant_degree(result, ctx) == target, as a list of atoms.
EquivariantLocalMap realize(const AnalysisContext& ctx, const DegreeVector& target);

/// Atom carrying the stratum Jacobian at a regular zero, plus the
/// straight-line otopy between f and the atom on the orbit of B(x0; R).
/// Throws NoValidRadius when no shell-clear radius >= 1e-4 exists.
std::pair<StandardAtom, Otopy> linearize(const EquivariantLocalMap& f, const Zero& zero,
                                         const AnalysisContext& ctx);

/// The orbit-ball support of a set of atoms.
InvariantDomain atom_support(const AtomList& atoms, std::shared_ptr<const FiniteGroup> group);

} // namespace eqdeg
