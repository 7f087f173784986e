#pragma once

// Otopy construction and verification: straight-line paths between maps on a
// shared domain, slice-wise degree constancy, and additivity of the degree
// over disjoint unions.

#include "eqdeg/realize.hpp"

namespace eqdeg {

/// Straight-line path (1-t) f + t g; slices must pass the locality check at
/// the sampled times, otherwise NotAnOtopy with a witness.
Otopy straight_line_otopy(const EquivariantLocalMap& f, const EquivariantLocalMap& g,
                          const AnalysisContext& ctx);

/// h_t = (1+t) f, valid for every local map (zeros are unchanged).
Otopy scaling_otopy(const EquivariantLocalMap& f);

Otopy reversed(const Otopy& h);

struct OtopySliceRow {
    double t = 0;
    DegreeVector vector;
    std::string status; // "ok", "retried at t=...", "inconclusive"
};

struct OtopyInvarianceReport {
    bool pass = false;
    bool constant = false;
    std::vector<OtopySliceRow> rows;
    std::string note;
};

/// Degree vector at t_samples equispaced slices; a DegenerateZero slice is
/// retried at t +- 1/97 before being reported inconclusive.
OtopyInvarianceReport verify_otopy_invariance(const Otopy& h, const AnalysisContext& ctx,
                                              int t_samples);

struct AdditivityReport {
    bool pass = false;
    DegreeVector left, right, both;
};

/// deg(f ⊔ g) == deg(f) + deg(g), all against the same context.
AdditivityReport verify_additivity(const EquivariantLocalMap& f, const EquivariantLocalMap& g,
                                   const AnalysisContext& ctx);

} // namespace eqdeg
