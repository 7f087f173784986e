#pragma once

// Standard atoms: maps supported on the saturated orbit of a small ball, with
// a single nondegenerate zero orbit of prescribed sign. On the piece g*B(c;r)
// the value at y is g * L * (g^-1 y - c). L restricted to V^H carries the
// prescribed determinant sign; across V^H it is the identity (constructed
// atoms) or the map's own normal derivative (linearization atoms). Either
// way L commutes with the isotropy group of c, so the formula is equivariant
// and well-defined on overlapping translates.

#include <optional>
#include <vector>

#include "eqdeg/group.hpp"

namespace eqdeg {

struct StandardAtom {
    int entry = -1;     // orbit-type id of the center's isotropy group
    int component = -1; // quotient component id
    int sign = +1;
    Vec center;
    double radius = 0;
    Mat linear; // ambient linear part L

    // exact mirrors (always constructible: doubles are dyadic rationals)
    std::vector<Rat> center_exact;
    Rat radius_sq_exact;
    std::optional<RatMat> linear_exact;
};

struct AtomList {
    std::vector<StandardAtom> atoms;
    bool empty() const { return atoms.empty(); }
};

} // namespace eqdeg
