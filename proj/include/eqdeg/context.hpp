#pragma once

// Everything the degree computations need about a (group, domain) pair:
// orbit-type table, stratum charts at a fixed resolution, hypothesis status.
// All degree vectors produced against one context share its key space
// (orbit-type id, quotient component id).

#include "eqdeg/chart.hpp"

namespace eqdeg {

struct AnalysisContext {
    std::shared_ptr<const FiniteGroup> group;
    InvariantDomain domain;
    OrbitTypeTable table;
    HypothesisReport hypothesis;
    Tolerances tol;
    double base_delta = 0;  // resolved from tol.delta or the domain feature size
    double margin = 0;      // locality margin actually used
    std::vector<bool> charted;          // per entry; false only for 0-dim strata
    std::vector<ComponentChart> charts; // parallel to table.entries
    std::vector<std::string> warnings;

    static AnalysisContext build(std::shared_ptr<const FiniteGroup> group,
                                 InvariantDomain domain, Tolerances tol);

    const ComponentChart& chart(int entry) const;
    int component_count(int entry) const;

    /// All (entry, component) keys, charted entries only, in canonical order.
    std::vector<std::pair<int, int>> keys() const;
};

} // namespace eqdeg
