#pragma once

// Grid-cell decomposition of one stratum Omega_H in V^H coordinates, with
// connected-component labels before and after dividing out the Weyl action.
// Component counts are approximations certified by stability under grid
// refinement, never by exact topology.

#include <map>
#include <vector>

#include "eqdeg/domain.hpp"
#include "eqdeg/orbit_types.hpp"

namespace eqdeg {

struct ChartCell {
    std::vector<int> idx;   // grid multi-index; center = (idx + 1/2) * delta
    int pre = -1;           // component label in Omega_H
    int quot = -1;          // component label in Omega_H / WH
    double clearance = 0;   // min(domain inward distance, wall distance)
};

struct ComponentChart {
    int entry = -1;
    double delta = 0;
    int k = 0;                       // dim V^H
    Mat q;                           // ambient basis of the chart coordinates
    std::vector<ChartCell> cells;    // sorted by idx
    int pre_count = 0;
    int quot_count = 0;
    std::vector<int> witness;        // cell position per quotient component
    int snap_misses = 0;             // Weyl images whose cell was not kept
    bool snap_ambiguous = false;     // some Weyl image landed on a grid plane

    Vec cell_center(const ChartCell& c) const;       // in chart coordinates
    Vec cell_center_ambient(const ChartCell& c) const;
    int cell_at(const Vec& u) const;                 // position in cells, -1 if absent
    Vec to_chart(const Vec& x) const { return q.transpose() * x; }
};

/// Chart the stratum of the given table entry at resolution delta.
/// Throws ResolutionTooCoarse when a quotient component has fewer than 2 cells.
ComponentChart stratum_chart(const FiniteGroup& g, const InvariantDomain& omega,
                             const OrbitTypeTable& table, int entry, double delta,
                             const Tolerances& tol);

/// Quotient component id of a stratum point (ambient coordinates).
/// Throws OutsideChart.
int component_of(const ComponentChart& chart, const Vec& x);

} // namespace eqdeg
