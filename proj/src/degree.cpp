#include "eqdeg/degree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eqdeg {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

constexpr double kNewtonResidual = 1e-12;
constexpr int kNewtonMaxIter = 50;

// Newton iteration in chart coordinates; returns the converged point or nullopt.
std::optional<Vec> newton_from(const RestrictedMap& r, Vec u, double escape_radius) {
    for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
        Vec fu;
        try {
            fu = r.eval(u);
        } catch (const OutsideDomain&) {
            return std::nullopt;
        }
        if (fu.norm() <= kNewtonResidual) return u;
        Mat j;
        try {
            j = r.jacobian(u);
        } catch (const OutsideDomain&) {
            return std::nullopt;
        }
        Eigen::PartialPivLU<Mat> lu(j);
        Vec step = lu.solve(fu);
        if (!step.allFinite()) return std::nullopt;
        u -= step;
        if (u.norm() > escape_radius) return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

std::vector<Zero> find_stratum_zeros(const EquivariantLocalMap& f, const AnalysisContext& ctx,
                                     int entry, int* discarded) {
    const ComponentChart& chart = ctx.chart(entry);
    const OrbitTypeEntry& ent = ctx.table.entries[size_t(entry)];
    RestrictedMap restricted(f, ent.fixed);
    const int k = chart.k;

    if (f.is_empty() || f.domain().empty()) return {};

    Box bbox = ctx.domain.bounding_box();
    double escape = 0;
    for (const auto& s : bbox.sides) escape += std::max(s.lo * s.lo, s.hi * s.hi);
    escape = 2 * std::sqrt(escape) + 1;

    // seeds: chart cells, plus ball centers of the map's own support (atoms
    // place zeros there; they may fall between coarse cells)
    std::vector<Vec> seeds;
    for (const auto& cell : chart.cells) seeds.push_back(chart.cell_center(cell));
    for (const auto& piece : f.domain().pieces()) {
        if (piece.kind != DomainPiece::Kind::ball) continue;
        Vec u = chart.to_chart(piece.center);
        if ((piece.center - chart.q * u).norm() <= 1e-9 * (1 + piece.center.norm()))
            seeds.push_back(u);
    }

    std::vector<Vec> roots;
    for (const auto& seed : seeds) {
        auto u = newton_from(restricted, seed, escape);
        if (u) roots.push_back(*u);
    }

    // deduplicate (deterministic order first)
    std::sort(roots.begin(), roots.end(), lex_less);
    std::vector<Vec> unique;
    for (const auto& u : roots) {
        bool dup = false;
        for (const auto& v : unique)
            if ((u - v).norm() <= ctx.tol.r_dedup) { dup = true; break; }
        if (!dup) unique.push_back(u);
    }

    // close under the Weyl action: images of zeros are zeros by equivariance
    for (size_t i = 0; i < unique.size(); ++i)
        for (size_t w = 1; w < ent.weyl.coset_reps.size(); ++w) {
            Vec img = ent.weyl.action_on_fixed[w] * unique[i];
            bool dup = false;
            for (const auto& v : unique)
                if ((img - v).norm() <= ctx.tol.r_dedup) { dup = true; break; }
            if (!dup) unique.push_back(img);
        }
    std::sort(unique.begin(), unique.end(), lex_less);

    std::vector<Zero> zeros;
    int dropped = 0;
    for (const auto& u : unique) {
        Vec x = chart.q * u;
        if (!f.domain().contains(x)) { ++dropped; continue; }

        // a converged point with strictly larger isotropy belongs to another stratum
        bool mismatch = false;
        try {
            if (!(isotropy_group(*ctx.group, x, 1e-7) == ent.rep)) mismatch = true;
        } catch (const AmbiguousIsotropy&) {
            mismatch = true;
        }
        if (mismatch) { ++dropped; continue; }

        Zero z;
        z.point = x;
        z.u = u;
        z.entry = entry;
        z.stratum_jacobian = restricted.jacobian(u);
        double det = z.stratum_jacobian.determinant();
        z.det_abs = std::abs(det);

        // the sign must be well defined at the resolution we locate zeros at:
        // flag a zero as degenerate if |det| dips under the floor or flips
        // sign anywhere across the dedup radius
        bool degenerate = z.det_abs < ctx.tol.eta_reg;
        for (int dir = 0; dir < k && !degenerate; ++dir)
            for (int s : {-1, +1}) {
                Vec up = u;
                up(dir) += s * ctx.tol.r_dedup;
                double d;
                try {
                    d = restricted.jacobian(up).determinant();
                } catch (const OutsideDomain&) {
                    continue;
                }
                if (std::abs(d) < ctx.tol.eta_reg || (d > 0) != (det > 0)) {
                    degenerate = true;
                    break;
                }
            }
        if (degenerate) {
            std::ostringstream os;
            os << "degenerate zero on orbit type " << entry << " at u = [" << u.transpose()
               << "] with |det| = " << z.det_abs << "; perturb the map or refine";
            throw DegenerateZero(os.str());
        }
        z.sign = det > 0 ? +1 : -1;
        z.component = component_of(chart, x);
        zeros.push_back(std::move(z));
    }
    if (discarded) *discarded = dropped;

    // orbit ids via Weyl matching
    std::vector<int> parent(zeros.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[size_t(i)] != i) i = parent[size_t(i)] = parent[size_t(parent[size_t(i)])];
        return i;
    };
    for (size_t i = 0; i < zeros.size(); ++i)
        for (size_t w = 1; w < ent.weyl.coset_reps.size(); ++w) {
            Vec img = ent.weyl.action_on_fixed[w] * zeros[i].u;
            for (size_t j = 0; j < zeros.size(); ++j)
                if ((img - zeros[j].u).norm() <= ctx.tol.orbit_tol) {
                    int a = find(int(i)), b = find(int(j));
                    if (a != b) parent[size_t(std::max(a, b))] = std::min(a, b);
                }
        }
    std::map<int, int> orbit_ids;
    for (size_t i = 0; i < zeros.size(); ++i) {
        int root = find(int(i));
        auto [it, inserted] = orbit_ids.try_emplace(root, int(orbit_ids.size()));
        zeros[i].orbit = it->second;
    }

    // sanity: sign and component are constant along each orbit
    for (const auto& a : zeros)
        for (const auto& b : zeros)
            if (a.orbit == b.orbit && (a.sign != b.sign || a.component != b.component))
                throw Error("zero orbit with inconsistent sign or component (internal)");

    return zeros;
}

StratumResult stratum_degree(const EquivariantLocalMap& f, const AnalysisContext& ctx,
                             int entry) {
    StratumResult r;
    r.entry = entry;
    r.zeros = find_stratum_zeros(f, ctx, entry, &r.discarded_other_stratum);

    const int weyl_order = ctx.table.entries[size_t(entry)].weyl.order();
    for (const auto& z : r.zeros) r.raw_sums[z.component] += z.sign;
    for (const auto& [comp, raw] : r.raw_sums) {
        if (raw % weyl_order != 0) {
            std::ostringstream os;
            os << "raw sign sum " << raw << " on component " << comp << " of orbit type "
               << entry << " is not divisible by |WH| = " << weyl_order
               << "; an orbit member was probably missed, refine the seeds";
            throw DivisibilityViolation(os.str());
        }
        r.degrees[comp] = raw / weyl_order;
    }
    return r;
}

DegreeResult equivariant_degree(const EquivariantLocalMap& f, const AnalysisContext& ctx) {
    DegreeResult result;
    result.hypothesis_holds = ctx.hypothesis.holds;
    result.warnings = ctx.warnings;

    for (size_t e = 0; e < ctx.table.entries.size(); ++e) {
        if (!ctx.charted[e]) continue; // 0-dim stratum, excluded with warning
        StratumResult sr = stratum_degree(f, ctx, int(e));
        for (const auto& [comp, deg] : sr.degrees)
            result.vector.add(DegreeKey{int(e), comp}, deg);
        result.strata.push_back(std::move(sr));
    }
    return result;
}

int degree_of_linear(const Mat& a, double eta_reg) {
    double det = a.determinant();
    if (std::abs(det) < eta_reg)
        throw Singular("matrix determinant " + std::to_string(det) +
                       " is below the regularity floor");
    return det > 0 ? +1 : -1;
}

int oracle_degree_1d(const std::function<double(double)>& g,
                     const std::vector<Interval>& intervals) {
    int total = 0;
    for (const auto& iv : intervals) {
        double ga = g(iv.lo), gb = g(iv.hi);
        if (ga == 0.0 || gb == 0.0)
            throw ZeroAtEndpoint("map vanishes at an interval endpoint");
        total += ((gb > 0) - (gb < 0) - (ga > 0) + (ga < 0)) / 2;
    }
    return total;
}

int oracle_degree_2d(const std::function<Vec(const Vec&)>& g, const std::vector<Vec>& polygon,
                     int steps, double eta_loc) {
    if (polygon.size() < 3) throw Error("winding oracle needs a closed polygon");
    if (steps < int(polygon.size())) throw StepTooCoarse("fewer steps than polygon edges");

    double perimeter = 0;
    for (size_t i = 0; i < polygon.size(); ++i)
        perimeter += (polygon[(i + 1) % polygon.size()] - polygon[i]).norm();

    // distribute samples along edges by length
    std::vector<Vec> samples;
    for (size_t i = 0; i < polygon.size(); ++i) {
        const Vec& a = polygon[i];
        const Vec& b = polygon[(i + 1) % polygon.size()];
        int n = std::max(1, int(std::lround(steps * (b - a).norm() / perimeter)));
        for (int s = 0; s < n; ++s) samples.push_back(a + (b - a) * (double(s) / n));
    }

    double total = 0;
    double prev_angle = 0;
    for (size_t i = 0; i <= samples.size(); ++i) {
        Vec v = g(samples[i % samples.size()]);
        if (v.norm() < eta_loc)
            throw BoundaryTooClose("map too small on the contour: " + std::to_string(v.norm()));
        double angle = std::atan2(v(1), v(0));
        if (i > 0) {
            double inc = angle - prev_angle;
            while (inc > M_PI) inc -= 2 * M_PI;
            while (inc <= -M_PI) inc += 2 * M_PI;
            if (std::abs(inc) >= M_PI / 2)
                throw StepTooCoarse("angle increment " + std::to_string(inc) +
                                    " exceeds pi/2; increase steps");
            total += inc;
        }
        prev_angle = angle;
    }
    double winding = total / (2 * M_PI);
    int rounded = int(std::lround(winding));
    if (std::abs(winding - rounded) > 0.25)
        throw StepTooCoarse("accumulated winding " + std::to_string(winding) +
                            " is not close to an integer");
    return rounded;
}

} // namespace eqdeg
