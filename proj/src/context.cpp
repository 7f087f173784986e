#include "eqdeg/context.hpp"

#include <sstream>

namespace eqdeg {

AnalysisContext AnalysisContext::build(std::shared_ptr<const FiniteGroup> group,
                                       InvariantDomain domain, Tolerances tol) {
    AnalysisContext ctx;
    ctx.group = std::move(group);
    ctx.domain = std::move(domain);
    ctx.tol = tol;
    ctx.table = isotropy_types(*ctx.group, ctx.domain, tol);
    ctx.hypothesis = hypothesis_check(ctx.domain, *ctx.group);

    const double feature = ctx.domain.min_feature();
    ctx.base_delta = tol.delta > 0 ? tol.delta : feature / 16.0;
    ctx.margin = tol.margin > 0 ? tol.margin : feature / 10.0;

    if (!ctx.hypothesis.holds)
        ctx.warnings.push_back("hypothesis violated (" + ctx.hypothesis.reason +
                               "): degree computed, classification completeness not guaranteed");

    ctx.charts.resize(ctx.table.entries.size());
    ctx.charted.assign(ctx.table.entries.size(), false);
    for (size_t e = 0; e < ctx.table.entries.size(); ++e) {
        if (ctx.table.entries[e].fixed.dim() == 0) {
            // only reachable when the hypothesis fails; the classification
            // does not cover this stratum
            ctx.warnings.push_back("orbit type " + std::to_string(e) +
                                   " has a zero-dimensional stratum; excluded from the degree");
            continue;
        }
        double delta = ctx.base_delta;
        for (int attempt = 0;; ++attempt, delta /= 2) {
            try {
                ctx.charts[e] =
                    stratum_chart(*ctx.group, ctx.domain, ctx.table, int(e), delta, tol);
                ctx.charted[e] = true;
                if (attempt > 0) {
                    std::ostringstream os;
                    os << "orbit type " << e << " charted at refined delta " << delta;
                    ctx.warnings.push_back(os.str());
                }
                break;
            } catch (const ResolutionTooCoarse&) {
                if (attempt >= 4) throw;
            }
        }
    }
    return ctx;
}

const ComponentChart& AnalysisContext::chart(int entry) const {
    if (entry < 0 || size_t(entry) >= charts.size() || !charted[size_t(entry)])
        throw Error("orbit type " + std::to_string(entry) + " has no chart");
    return charts[size_t(entry)];
}

int AnalysisContext::component_count(int entry) const {
    return charted[size_t(entry)] ? charts[size_t(entry)].quot_count : 0;
}

std::vector<std::pair<int, int>> AnalysisContext::keys() const {
    std::vector<std::pair<int, int>> out;
    for (size_t e = 0; e < table.entries.size(); ++e)
        for (int c = 0; c < component_count(int(e)); ++c) out.emplace_back(int(e), c);
    return out;
}

} // namespace eqdeg
