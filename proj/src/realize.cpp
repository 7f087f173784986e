#include "eqdeg/realize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eqdeg {

namespace {

constexpr double kMinRadius = 1e-4;

Rat dyadic_floor(double x, int bits = 20) {
    return Rat(BigInt(std::floor(x * std::ldexp(1.0, bits))), BigInt(1) << bits);
}

std::vector<Rat> exact_vec(const Vec& v) {
    std::vector<Rat> r(size_t(v.size()));
    for (int i = 0; i < v.size(); ++i) r[size_t(i)] = rat_from_double(v(i));
    return r;
}

// ambient linear part: identity for sign +1, reflection across the first
// fixed-space direction for sign -1 (identity on the normal complement)
std::pair<Mat, std::optional<RatMat>> atom_linear(const OrbitTypeEntry& ent, int sign, int n,
                                                  bool group_exact) {
    if (sign > 0) {
        std::optional<RatMat> exact;
        if (group_exact) exact = RatMat::identity(n);
        return {Mat::Identity(n, n), std::move(exact)};
    }
    Vec q1 = ent.fixed.q.col(0);
    Mat m = Mat::Identity(n, n) - 2.0 * q1 * q1.transpose();
    std::optional<RatMat> exact;
    if (group_exact && ent.fixed.exact) {
        RatMat a1 = ent.fixed.raw.col(0);
        RatMat outer = a1 * a1.transposed();
        RatMat refl = RatMat::identity(n) - outer * (Rat(2) / dot(a1, a1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rat_to_double(refl(i, j));
        exact = std::move(refl);
    }
    return {m, std::move(exact)};
}

// min ||g x - x|| over elements that move x; +inf if all of G fixes x
double orbit_separation(const FiniteGroup& g, const Vec& x, const Subgroup& stabilizer) {
    double sep = std::numeric_limits<double>::infinity();
    for (int e = 0; e < g.order(); ++e) {
        if (stabilizer.contains(e)) continue;
        sep = std::min(sep, (g.mat(e) * x - x).norm());
    }
    return sep;
}

// largest radius so that the saturated support around center stays clear of
// already placed atoms
double clearance_to_atoms(const FiniteGroup& g, const Vec& center,
                          const std::vector<StandardAtom>& placed) {
    double room = std::numeric_limits<double>::infinity();
    for (const auto& a : placed)
        for (int e = 0; e < g.order(); ++e)
            room = std::min(room, (g.mat(e) * center - a.center).norm() - a.radius);
    return room;
}

StandardAtom make_atom(const AnalysisContext& ctx, int entry, int component, int sign,
                       const Vec& center, double max_radius) {
    const OrbitTypeEntry& ent = ctx.table.entries[size_t(entry)];
    const int n = ctx.group->dim();

    double sep = orbit_separation(*ctx.group, center, ent.rep);
    double inward = ctx.domain.inward_distance(center);
    double r = std::min({0.45 * sep, 0.9 * inward, max_radius});
    if (!(r >= kMinRadius))
        throw NoRoom("cannot fit an atom of radius >= 1e-4 at the chosen witness (component " +
                     std::to_string(component) + " of orbit type " + std::to_string(entry) +
                     " too thin at this resolution)");

    StandardAtom atom;
    atom.entry = entry;
    atom.component = component;
    atom.sign = sign;
    atom.center = center;
    Rat r_exact = dyadic_floor(r);
    atom.radius = rat_to_double(r_exact);
    atom.radius_sq_exact = r_exact * r_exact;
    atom.center_exact = exact_vec(center);
    auto [linear, linear_exact] = atom_linear(ent, sign, n, ctx.group->exact());
    atom.linear = std::move(linear);
    atom.linear_exact = std::move(linear_exact);
    return atom;
}

} // namespace

InvariantDomain atom_support(const AtomList& atoms, std::shared_ptr<const FiniteGroup> group) {
    std::vector<Vec> centers;
    std::vector<double> radii;
    for (const auto& a : atoms.atoms) {
        centers.push_back(a.center);
        radii.push_back(a.radius);
    }
    return InvariantDomain::orbit_balls(centers, radii, std::move(group));
}

StandardAtom standard_atom(const AnalysisContext& ctx, int entry, int component, int sign) {
    const ComponentChart& chart = ctx.chart(entry);
    if (component < 0 || component >= chart.quot_count)
        throw ConfigError("invalid quotient component " + std::to_string(component) +
                          " for orbit type " + std::to_string(entry));
    if (sign != 1 && sign != -1) throw ConfigError("atom sign must be +1 or -1");
    const ChartCell& cell = chart.cells[size_t(chart.witness[size_t(component)])];
    return make_atom(ctx, entry, component, sign, chart.cell_center_ambient(cell),
                     2.0 * chart.delta);
}

StandardAtom atom_at(const AnalysisContext& ctx, int entry, int component, int sign,
                     const Vec& center, const std::vector<Rat>& center_exact,
                     const Rat& radius) {
    const ComponentChart& chart = ctx.chart(entry);
    const OrbitTypeEntry& ent = ctx.table.entries[size_t(entry)];
    if (component < 0 || component >= chart.quot_count)
        throw ConfigError("invalid quotient component " + std::to_string(component) +
                          " for orbit type " + std::to_string(entry));
    if (sign != 1 && sign != -1) throw ConfigError("atom sign must be +1 or -1");

    try {
        if (!(isotropy_group(*ctx.group, center, 1e-7) == ent.rep))
            throw ConfigError("atom center does not have the isotropy of orbit type " +
                              std::to_string(entry));
    } catch (const AmbiguousIsotropy&) {
        throw ConfigError("atom center sits too close to a stratum wall");
    }
    if (component_of(chart, center) != component)
        throw ConfigError("atom center lies in a different quotient component");

    const double r = rat_to_double(radius);
    if (r < kMinRadius) throw ConfigError("atom radius below the 1e-4 floor");
    if (!(2 * r < orbit_separation(*ctx.group, center, ent.rep)))
        throw ConfigError("atom radius violates the orbit separation bound");
    if (!(r <= ctx.domain.inward_distance(center)))
        throw ConfigError("atom support leaves the domain");

    StandardAtom atom;
    atom.entry = entry;
    atom.component = component;
    atom.sign = sign;
    atom.center = center;
    atom.center_exact = center_exact;
    atom.radius = r;
    atom.radius_sq_exact = radius * radius;
    auto [linear, linear_exact] = atom_linear(ent, sign, ctx.group->dim(), ctx.group->exact());
    atom.linear = std::move(linear);
    atom.linear_exact = std::move(linear_exact);
    return atom;
}

EquivariantLocalMap disjoint_union(const EquivariantLocalMap& f, const EquivariantLocalMap& g) {
    if (f.is_empty()) return g;
    if (g.is_empty()) return f;
    if (!f.domain().disjoint_from(g.domain()))
        throw Overlap("domains of the union are not disjoint");

    if (f.atoms() && g.atoms()) {
        AtomList merged = *f.atoms();
        merged.atoms.insert(merged.atoms.end(), g.atoms()->atoms.begin(), g.atoms()->atoms.end());
        return EquivariantLocalMap::from_atoms(std::move(merged), f.group_ptr());
    }
    // general piecewise union over the two domains
    UnionBody body;
    body.parts.push_back(std::make_shared<EquivariantLocalMap>(f));
    body.parts.push_back(std::make_shared<EquivariantLocalMap>(g));
    InvariantDomain dom = InvariantDomain::merge(f.domain(), g.domain());
    return EquivariantLocalMap::from_union(std::move(body), std::move(dom), f.group_ptr());
}

EquivariantLocalMap realize(const AnalysisContext& ctx, const DegreeVector& target) {
    // validate keys first
    for (const auto& [key, value] : target.support()) {
        if (key.entry < 0 || size_t(key.entry) >= ctx.table.entries.size() ||
            !ctx.charted[size_t(key.entry)])
            throw ConfigError("target key refers to unknown orbit type " +
                              std::to_string(key.entry));
        if (key.component < 0 || key.component >= ctx.component_count(key.entry))
            throw ConfigError("target key refers to unknown component " +
                              std::to_string(key.component) + " of orbit type " +
                              std::to_string(key.entry));
        (void)value;
    }

    // biggest multiplicities first: they need the most room
    std::vector<std::pair<DegreeKey, int>> order(target.support().begin(),
                                                 target.support().end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.second) != std::abs(b.second))
            return std::abs(a.second) > std::abs(b.second);
        return a.first < b.first;
    });

    AtomList atoms;
    for (const auto& [key, value] : order) {
        const ComponentChart& chart = ctx.chart(key.entry);
        const int sign = value > 0 ? +1 : -1;
        const int count = std::abs(value);

        // candidate cells of this component, best clearance first
        std::vector<int> candidates;
        for (size_t c = 0; c < chart.cells.size(); ++c)
            if (chart.cells[c].quot == key.component) candidates.push_back(int(c));
        std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            if (chart.cells[size_t(a)].clearance != chart.cells[size_t(b)].clearance)
                return chart.cells[size_t(a)].clearance > chart.cells[size_t(b)].clearance;
            return chart.cells[size_t(a)].idx < chart.cells[size_t(b)].idx;
        });

        int placed = 0;
        for (int cand : candidates) {
            if (placed == count) break;
            Vec center = chart.cell_center_ambient(chart.cells[size_t(cand)]);
            double room = clearance_to_atoms(*ctx.group, center, atoms.atoms);
            if (room < kMinRadius) continue;
            try {
                atoms.atoms.push_back(make_atom(ctx, key.entry, key.component, sign, center,
                                                std::min(0.9 * room, 2.0 * chart.delta)));
                ++placed;
            } catch (const NoRoom&) {
                continue;
            }
        }
        if (placed < count) {
            std::ostringstream os;
            os << "component " << key.component << " of orbit type " << key.entry
               << " cannot host " << count
               << " disjoint atoms at this resolution; refine the chart";
            throw NoRoom(os.str());
        }
    }
    return EquivariantLocalMap::from_atoms(std::move(atoms), ctx.group);
}

std::pair<StandardAtom, Otopy> linearize(const EquivariantLocalMap& f, const Zero& zero,
                                         const AnalysisContext& ctx) {
    const OrbitTypeEntry& ent = ctx.table.entries[size_t(zero.entry)];
    const int n = ctx.group->dim();

    StandardAtom atom;
    atom.entry = zero.entry;
    atom.component = zero.component;
    atom.sign = zero.sign;
    atom.center = zero.point;
    atom.center_exact = exact_vec(zero.point);
    // Ambient extension: the stratum Jacobian on V^H plus the map's own
    // derivative across it. Df(x0) commutes with H at an H-fixed zero, so it
    // is block diagonal over (V^H, complement); reusing its normal block
    // keeps the straight-line blend nondegenerate in the normal directions.
    const Mat normal = Mat::Identity(n, n) - ent.fixed.proj;
    Mat ambient = f.jacobian(zero.point);
    atom.linear = ent.fixed.q * zero.stratum_jacobian * ent.fixed.q.transpose() +
                  normal * ambient * normal;
    if (ctx.group->exact() && ent.fixed.ortho_exact) {
        RatMat le(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) le(i, j) = rat_from_double(atom.linear(i, j));
        atom.linear_exact = std::move(le);
    }
    if (std::abs(atom.linear.determinant()) < ctx.tol.eta_reg)
        throw DegenerateZero("zero is regular on its stratum but degenerate across it");

    double sep = orbit_separation(*ctx.group, zero.point, ent.rep);
    double inward = ctx.domain.inward_distance(zero.point);
    double radius = std::min(0.45 * sep, 0.9 * inward);

    // shrink until the straight-line blend is zero-free on the outer shell
    // for sampled times (a sampled check on a (t, shell) grid)
    auto shell_clear = [&](double r) {
        AtomList single;
        single.atoms.push_back(atom);
        single.atoms.back().radius = r;
        single.atoms.back().radius_sq_exact = rat_from_double(r) * rat_from_double(r);
        auto atom_map = EquivariantLocalMap::from_atoms(std::move(single), ctx.group);
        for (int ti = 0; ti <= 20; ++ti) {
            Rat t(ti, 20);
            for (double rho : {0.5 * r, 0.75 * r, 0.999 * r}) {
                const int dirs = n == 1 ? 2 : 16;
                for (int d = 0; d < dirs; ++d) {
                    Vec offset(n);
                    if (n == 1) {
                        offset(0) = d == 0 ? rho : -rho;
                    } else {
                        offset.setZero();
                        double a = 2 * M_PI * d / dirs;
                        offset(0) = rho * std::cos(a);
                        offset(1) = rho * std::sin(a);
                    }
                    Vec x = zero.point + offset;
                    double ft = rat_to_double(Rat(1) - t);
                    Vec value;
                    try {
                        value = ft * f.evaluate(x) + rat_to_double(t) * atom_map.evaluate(x);
                    } catch (const OutsideDomain&) {
                        return false;
                    }
                    if (value.norm() < ctx.tol.eta_loc) return false;
                }
            }
        }
        return true;
    };

    while (!(radius < kMinRadius) && !shell_clear(radius)) radius /= 2;
    if (radius < kMinRadius)
        throw NoValidRadius("no straight-line radius >= 1e-4 is zero-free on the shell");

    Rat r_exact = dyadic_floor(radius);
    atom.radius = rat_to_double(r_exact);
    atom.radius_sq_exact = r_exact * r_exact;

    AtomList list;
    list.atoms.push_back(atom);
    auto support = atom_support(list, ctx.group);
    auto atom_map = EquivariantLocalMap::from_atoms(std::move(list), ctx.group);
    Otopy path = Otopy::between(f, atom_map, support);
    return {std::move(atom), std::move(path)};
}

} // namespace eqdeg
