#include "eqdeg/otopy.hpp"

#include <cmath>
#include <sstream>

namespace eqdeg {

namespace {

bool same_domain(const InvariantDomain& a, const InvariantDomain& b) {
    if (a.pieces().size() != b.pieces().size()) return false;
    if (a.empty()) return true;
    Box ba = a.bounding_box(), bb = b.bounding_box();
    for (int i = 0; i < ba.dim(); ++i)
        if (std::abs(ba.sides[i].lo - bb.sides[i].lo) > 1e-12 ||
            std::abs(ba.sides[i].hi - bb.sides[i].hi) > 1e-12)
            return false;
    return true;
}

void check_slices_local(const Otopy& h, const AnalysisContext& ctx) {
    for (int i = 0; i < ctx.tol.t_samples; ++i) {
        Rat t(i, std::max(1, ctx.tol.t_samples - 1));
        auto slice = h.slice(t);
        auto rep = check_locality(slice, ctx.margin, ctx.tol.eta_loc);
        if (!rep.pass) {
            std::ostringstream os;
            os << "zero set reaches the domain boundary at t = " << rat_to_double(t);
            if (!rep.offenders.empty())
                os << " near x = [" << rep.offenders.front().transpose() << "]";
            throw NotAnOtopy(os.str());
        }
    }
}

} // namespace

Otopy straight_line_otopy(const EquivariantLocalMap& f, const EquivariantLocalMap& g,
                          const AnalysisContext& ctx) {
    if (&f.group() != &g.group() && f.group().order() != g.group().order())
        throw NotAnOtopy("maps act under different groups");
    if (!same_domain(f.domain(), g.domain()))
        throw NotAnOtopy("straight-line path needs a shared domain");
    Otopy h = Otopy::between(f, g, f.domain());
    check_slices_local(h, ctx);
    return h;
}

Otopy scaling_otopy(const EquivariantLocalMap& f) {
    return Otopy::between(f, EquivariantLocalMap::scaled(f, Rat(2)), f.domain());
}

Otopy reversed(const Otopy& h) {
    // (1-s) h1 + s h0 over the same domain
    return Otopy::between(h.slice(Rat(1)), h.slice(Rat(0)), h.domain());
}

OtopyInvarianceReport verify_otopy_invariance(const Otopy& h, const AnalysisContext& ctx,
                                              int t_samples) {
    OtopyInvarianceReport report;
    const int denom = std::max(1, t_samples - 1);

    auto degree_at = [&](const Rat& t) -> std::optional<DegreeVector> {
        try {
            return equivariant_degree(h.slice(t), ctx).vector;
        } catch (const DegenerateZero&) {
            return std::nullopt;
        }
    };

    bool all_resolved = true;
    for (int i = 0; i < t_samples; ++i) {
        Rat t(i, denom);
        OtopySliceRow row;
        row.t = rat_to_double(t);
        auto vec = degree_at(t);
        if (vec) {
            row.vector = *vec;
            row.status = "ok";
        } else {
            // genericity can fail at isolated times; shift and retry
            bool resolved = false;
            for (int dir : {+1, -1}) {
                Rat shifted = t + Rat(dir, 97);
                if (shifted < 0 || shifted > 1) continue;
                auto retried = degree_at(shifted);
                if (retried) {
                    row.vector = *retried;
                    std::ostringstream os;
                    os << "retried at t=" << rat_to_double(shifted);
                    row.status = os.str();
                    resolved = true;
                    break;
                }
            }
            if (!resolved) {
                row.status = "inconclusive";
                all_resolved = false;
            }
        }
        report.rows.push_back(std::move(row));
    }

    report.constant = true;
    const DegreeVector* first = nullptr;
    for (const auto& row : report.rows) {
        if (row.status == "inconclusive") continue;
        if (!first)
            first = &row.vector;
        else if (!(row.vector == *first))
            report.constant = false;
    }
    report.pass = all_resolved && report.constant;
    if (!all_resolved) report.note = "some slices remained inconclusive after the retry rule";
    if (!report.constant) report.note = "degree vector changed between slices";
    return report;
}

AdditivityReport verify_additivity(const EquivariantLocalMap& f, const EquivariantLocalMap& g,
                                   const AnalysisContext& ctx) {
    AdditivityReport report;
    report.left = equivariant_degree(f, ctx).vector;
    report.right = equivariant_degree(g, ctx).vector;
    auto u = disjoint_union(f, g); // throws Overlap when domains meet
    report.both = equivariant_degree(u, ctx).vector;
    report.pass = report.both == report.left + report.right;
    return report;
}

} // namespace eqdeg
