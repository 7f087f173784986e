#include "eqdeg/local_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eqdeg {

namespace {

// locate the translate g*B(c;r) containing x; returns (atom index, g) or (-1,-1)
std::pair<int, int> find_atom_piece(const FiniteGroup& g, const AtomList& atoms, const Vec& x) {
    for (size_t a = 0; a < atoms.atoms.size(); ++a) {
        const StandardAtom& atom = atoms.atoms[a];
        for (int e = 0; e < g.order(); ++e) {
            Vec z = g.mat(g.inv(e)) * x;
            if ((z - atom.center).norm() < atom.radius) return {int(a), e};
        }
    }
    return {-1, -1};
}

Vec eval_atoms(const FiniteGroup& g, const AtomList& atoms, const Vec& x) {
    auto [a, e] = find_atom_piece(g, atoms, x);
    if (a < 0) throw OutsideDomain("point outside every atom support");
    const StandardAtom& atom = atoms.atoms[size_t(a)];
    Vec z = g.mat(g.inv(e)) * x;
    return g.mat(e) * (atom.linear * (z - atom.center));
}

std::vector<Rat> mat_vec_exact(const RatMat& m, const std::vector<Rat>& x) {
    std::vector<Rat> y(size_t(m.rows()), Rat(0));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) y[size_t(i)] += m(i, j) * x[size_t(j)];
    return y;
}

std::vector<Rat> eval_atoms_exact(const FiniteGroup& g, const AtomList& atoms,
                                  const std::vector<Rat>& x) {
    for (const auto& atom : atoms.atoms) {
        for (int e = 0; e < g.order(); ++e) {
            std::vector<Rat> z = mat_vec_exact(*g.element(g.inv(e)).exact, x);
            Rat dist2 = 0;
            for (size_t i = 0; i < z.size(); ++i) {
                Rat d = z[i] - atom.center_exact[i];
                dist2 += d * d;
            }
            if (dist2 < atom.radius_sq_exact) {
                for (size_t i = 0; i < z.size(); ++i) z[i] -= atom.center_exact[i];
                return mat_vec_exact(*g.element(e).exact, mat_vec_exact(*atom.linear_exact, z));
            }
        }
    }
    throw OutsideDomain("point outside every atom support (exact)");
}

} // namespace

EquivariantLocalMap EquivariantLocalMap::empty(std::shared_ptr<const FiniteGroup> group) {
    EquivariantLocalMap m;
    m.group_ = std::move(group);
    m.body_ = EmptyBody{};
    return m;
}

EquivariantLocalMap EquivariantLocalMap::from_expression(MapExpression expr,
                                                         InvariantDomain domain) {
    if (expr.has_t) throw Error("time-dependent expression used as a plain map");
    EquivariantLocalMap m;
    m.group_ = domain.group_ptr();
    if (expr.inputs != m.group_->dim() || expr.outputs != m.group_->dim())
        throw DimensionMismatch("map must have n inputs and n outputs");
    m.domain_ = std::move(domain);
    m.body_ = ExprBody{std::move(expr)};
    return m;
}

EquivariantLocalMap EquivariantLocalMap::from_atoms(AtomList atoms,
                                                    std::shared_ptr<const FiniteGroup> group) {
    EquivariantLocalMap m;
    m.group_ = group;
    if (atoms.empty()) {
        m.body_ = EmptyBody{};
        return m;
    }
    std::vector<Vec> centers;
    std::vector<double> radii;
    for (const auto& a : atoms.atoms) {
        centers.push_back(a.center);
        radii.push_back(a.radius);
    }
    m.domain_ = InvariantDomain::orbit_balls(centers, radii, std::move(group));
    m.body_ = AtomBody{std::move(atoms)};
    return m;
}

EquivariantLocalMap EquivariantLocalMap::scaled(EquivariantLocalMap base, const Rat& factor) {
    EquivariantLocalMap m;
    m.group_ = base.group_;
    m.domain_ = base.domain_;
    m.body_ = ScaledBody{std::make_shared<EquivariantLocalMap>(std::move(base)), factor};
    return m;
}

EquivariantLocalMap EquivariantLocalMap::blend(EquivariantLocalMap a, EquivariantLocalMap b,
                                               const Rat& t, InvariantDomain domain) {
    EquivariantLocalMap m;
    m.group_ = a.group_;
    m.domain_ = std::move(domain);
    m.body_ = BlendBody{std::make_shared<EquivariantLocalMap>(std::move(a)),
                        std::make_shared<EquivariantLocalMap>(std::move(b)), t};
    return m;
}

EquivariantLocalMap EquivariantLocalMap::from_union(UnionBody parts, InvariantDomain domain,
                                                    std::shared_ptr<const FiniteGroup> group) {
    EquivariantLocalMap m;
    m.group_ = std::move(group);
    m.domain_ = std::move(domain);
    m.body_ = std::move(parts);
    return m;
}

const AtomList* EquivariantLocalMap::atoms() const {
    if (const auto* b = std::get_if<AtomBody>(&body_)) return &b->atoms;
    return nullptr;
}

Vec EquivariantLocalMap::evaluate(const Vec& x) const {
    return std::visit(
        [&](const auto& body) -> Vec {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, EmptyBody>) {
                throw OutsideDomain("the empty map has no domain");
            } else if constexpr (std::is_same_v<T, ExprBody>) {
                if (!domain_.contains(x)) throw OutsideDomain("point outside the map domain");
                return body.expr.eval(x);
            } else if constexpr (std::is_same_v<T, AtomBody>) {
                return eval_atoms(*group_, body.atoms, x);
            } else if constexpr (std::is_same_v<T, ScaledBody>) {
                return rat_to_double(body.factor) * body.base->evaluate(x);
            } else if constexpr (std::is_same_v<T, BlendBody>) {
                if (!domain_.contains(x)) throw OutsideDomain("point outside the blend domain");
                double t = rat_to_double(body.t);
                return (1.0 - t) * body.a->evaluate(x) + t * body.b->evaluate(x);
            } else {
                for (const auto& part : body.parts)
                    if (part->domain().contains(x)) return part->evaluate(x);
                throw OutsideDomain("point outside every union part");
            }
        },
        body_);
}

Mat EquivariantLocalMap::jacobian(const Vec& x) const {
    return std::visit(
        [&](const auto& body) -> Mat {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, EmptyBody>) {
                throw OutsideDomain("the empty map has no domain");
            } else if constexpr (std::is_same_v<T, ExprBody>) {
                if (!domain_.contains(x)) throw OutsideDomain("point outside the map domain");
                return body.expr.jacobian(x);
            } else if constexpr (std::is_same_v<T, AtomBody>) {
                auto [a, e] = find_atom_piece(*group_, body.atoms, x);
                if (a < 0) throw OutsideDomain("point outside every atom support");
                const Mat& ge = group_->mat(e);
                return ge * body.atoms.atoms[size_t(a)].linear * ge.transpose();
            } else if constexpr (std::is_same_v<T, ScaledBody>) {
                return rat_to_double(body.factor) * body.base->jacobian(x);
            } else if constexpr (std::is_same_v<T, BlendBody>) {
                if (!domain_.contains(x)) throw OutsideDomain("point outside the blend domain");
                double t = rat_to_double(body.t);
                return (1.0 - t) * body.a->jacobian(x) + t * body.b->jacobian(x);
            } else {
                for (const auto& part : body.parts)
                    if (part->domain().contains(x)) return part->jacobian(x);
                throw OutsideDomain("point outside every union part");
            }
        },
        body_);
}

std::vector<Rat> EquivariantLocalMap::evaluate_exact(const std::vector<Rat>& x) const {
    return std::visit(
        [&](const auto& body) -> std::vector<Rat> {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, EmptyBody>) {
                throw OutsideDomain("the empty map has no domain");
            } else if constexpr (std::is_same_v<T, ExprBody>) {
                return body.expr.eval_exact(x);
            } else if constexpr (std::is_same_v<T, AtomBody>) {
                return eval_atoms_exact(*group_, body.atoms, x);
            } else if constexpr (std::is_same_v<T, ScaledBody>) {
                std::vector<Rat> y = body.base->evaluate_exact(x);
                for (auto& v : y) v *= body.factor;
                return y;
            } else if constexpr (std::is_same_v<T, BlendBody>) {
                std::vector<Rat> ya = body.a->evaluate_exact(x);
                std::vector<Rat> yb = body.b->evaluate_exact(x);
                for (size_t i = 0; i < ya.size(); ++i)
                    ya[i] = (Rat(1) - body.t) * ya[i] + body.t * yb[i];
                return ya;
            } else {
                // union parts keep their own domains; use the double test to route
                Vec xd(int(x.size()));
                for (size_t i = 0; i < x.size(); ++i) xd(int(i)) = rat_to_double(x[i]);
                for (const auto& part : body.parts)
                    if (part->domain().contains(xd)) return part->evaluate_exact(x);
                throw OutsideDomain("point outside every union part");
            }
        },
        body_);
}

bool EquivariantLocalMap::exact() const {
    return std::visit(
        [&](const auto& body) -> bool {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, EmptyBody>) {
                return true;
            } else if constexpr (std::is_same_v<T, ExprBody>) {
                return true; // coefficients are always rational
            } else if constexpr (std::is_same_v<T, AtomBody>) {
                for (const auto& a : body.atoms.atoms)
                    if (!a.linear_exact) return false;
                return true;
            } else if constexpr (std::is_same_v<T, ScaledBody>) {
                return body.base->exact();
            } else if constexpr (std::is_same_v<T, BlendBody>) {
                return body.a->exact() && body.b->exact();
            } else {
                return std::all_of(body.parts.begin(), body.parts.end(),
                                   [](const auto& p) { return p->exact(); });
            }
        },
        body_);
}

// ---------------------------------------------------------------------------

DomainSampler::DomainSampler(const InvariantDomain& domain, unsigned long long seed)
    : domain_(&domain), rng_(seed ^ 0x9e3779b97f4a7c15ull) {}

Vec DomainSampler::next() {
    if (domain_->empty()) throw EmptyDomain("sampling an empty domain");
    const FiniteGroup& g = domain_->group();
    // dyadic offsets keep exact layers exact downstream
    std::uniform_int_distribution<int> dy(1, (1 << 12) - 1);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const DomainPiece& p = domain_->pieces()[piece_ % domain_->pieces().size()];
        ++piece_;
        Vec x(g.dim());
        if (p.kind == DomainPiece::Kind::box) {
            for (int i = 0; i < g.dim(); ++i) {
                double w = p.base.sides[i].hi - p.base.sides[i].lo;
                x(i) = p.base.sides[i].lo + w * (dy(rng_) / 4096.0);
            }
            x = g.mat(p.g) * x;
        } else {
            for (int i = 0; i < g.dim(); ++i)
                x(i) = p.center(i) + p.radius * (2.0 * (dy(rng_) / 4096.0) - 1.0);
            if ((x - p.center).norm() >= p.radius) continue;
        }
        if (domain_->contains(x)) return x;
    }
    throw Error("domain sampling failed (domain too thin?)");
}

EquivarianceReport check_equivariance(const EquivariantLocalMap& f, int samples,
                                      unsigned long long seed, double tol_equiv) {
    EquivarianceReport rep;
    if (f.is_empty() || f.domain().empty()) return rep;

    const FiniteGroup& g = f.group();
    const bool exact = g.exact() && f.exact();
    rep.exact_checked = exact;

    DomainSampler sampler(f.domain(), seed);
    for (int s = 0; s < samples; ++s) {
        Vec x;
        try {
            x = sampler.next();
        } catch (const Error&) {
            break;
        }
        ++rep.samples_used;
        for (int gen : g.generator_ids()) {
            double defect;
            if (exact) {
                std::vector<Rat> xr(size_t(g.dim()));
                for (int i = 0; i < g.dim(); ++i) xr[size_t(i)] = rat_from_double(x(i));
                std::vector<Rat> fgx = f.evaluate_exact(mat_vec_exact(*g.element(gen).exact, xr));
                std::vector<Rat> gfx = mat_vec_exact(*g.element(gen).exact, f.evaluate_exact(xr));
                Rat d2 = 0;
                for (size_t i = 0; i < fgx.size(); ++i) {
                    Rat d = fgx[i] - gfx[i];
                    d2 += d * d;
                }
                defect = std::sqrt(rat_to_double(d2));
                // an exact nonzero defect must fail even if it underflows
                if (d2 != 0 && defect == 0.0) defect = 1e-300;
            } else {
                Vec fgx, gfx;
                try {
                    fgx = f.evaluate(g.mat(gen) * x);
                    gfx = g.mat(gen) * f.evaluate(x);
                } catch (const OutsideDomain&) {
                    continue; // rounding pushed the sample across the open boundary
                }
                defect = (fgx - gfx).norm();
            }
            if (defect > rep.max_defect) {
                rep.max_defect = defect;
                rep.witness = x;
                rep.witness_gen = gen;
            }
        }
    }
    rep.pass = exact ? rep.max_defect == 0.0 : rep.max_defect <= tol_equiv;
    return rep;
}

LocalityReport check_locality(const EquivariantLocalMap& f, double margin, double eta_loc) {
    if (!(margin > 0)) throw Error("check_locality: margin must be positive");
    LocalityReport rep;
    rep.margin = margin;
    if (f.is_empty() || f.domain().empty()) return rep; // the empty map is local

    const InvariantDomain& omega = f.domain();
    const double step = margin / 8.0;
    Box bbox = omega.bounding_box();
    const int n = bbox.dim();

    std::vector<int> counts(n);
    for (int i = 0; i < n; ++i)
        counts[i] = std::max(1, int(std::ceil((bbox.sides[i].hi - bbox.sides[i].lo) / step)));

    // Per-sample threshold: a zero hiding between samples at local slope L
    // keeps ||f|| below roughly L * step * sqrt(n) at the nearest sample, so
    // values under that bound mean the zero set may touch the shell.
    const double cell_reach = step * std::sqrt(double(n));

    std::vector<int> idx(n, 0);
    while (true) {
        Vec x(n);
        for (int i = 0; i < n; ++i) x(i) = bbox.sides[i].lo + (idx[i] + 0.5) * step;
        if (omega.contains(x) && omega.inward_distance(x, margin * 1.0000001) <= margin) {
            ++rep.shell_samples;
            double norm = f.evaluate(x).norm();
            rep.min_norm = std::min(rep.min_norm, norm);
            double slope = f.jacobian(x).norm(); // Frobenius, conservative
            if (norm < std::max(eta_loc, slope * cell_reach)) {
                rep.pass = false;
                if (rep.offenders.size() < 8) rep.offenders.push_back(x);
            }
        }
        int axis = 0;
        while (axis < n && ++idx[axis] >= counts[axis]) idx[axis++] = 0;
        if (axis == n) break;
    }
    return rep;
}

// ---------------------------------------------------------------------------

Vec RestrictedMap::eval(const Vec& u) const {
    return basis_->q.transpose() * f_->evaluate(basis_->q * u);
}

Mat RestrictedMap::jacobian(const Vec& u) const {
    return basis_->q.transpose() * f_->jacobian(basis_->q * u) * basis_->q;
}

void RestrictedMap::validate(int samples, unsigned long long seed, double tol_equiv) const {
    if (f_->is_empty() || dim() == 0) return;
    Box bbox = f_->domain().bounding_box();
    double radius = 0;
    for (const auto& s : bbox.sides) radius += std::max(s.lo * s.lo, s.hi * s.hi);
    radius = std::sqrt(radius);

    std::mt19937_64 rng(seed ^ 0xABCDu);
    std::uniform_real_distribution<double> coord(-radius, radius);
    int found = 0;
    for (int attempt = 0; attempt < samples * 200 && found < samples; ++attempt) {
        Vec u(dim());
        for (int i = 0; i < dim(); ++i) u(i) = coord(rng);
        Vec x = basis_->q * u;
        if (!f_->domain().contains(x)) continue;
        ++found;
        Vec y = f_->evaluate(x);
        double defect = (y - basis_->proj * y).norm();
        if (defect > tol_equiv) {
            std::ostringstream os;
            os << "map leaves the fixed subspace: defect " << defect << " at u = ["
               << u.transpose() << "]";
            throw NotInvariantSubspace(os.str());
        }
    }
}

// ---------------------------------------------------------------------------

Otopy Otopy::between(EquivariantLocalMap a, EquivariantLocalMap b, InvariantDomain domain) {
    Otopy h;
    h.group_ = a.group_ptr();
    h.domain_ = std::move(domain);
    h.endpoints_ = std::make_pair(std::move(a), std::move(b));
    return h;
}

Otopy Otopy::from_expression(MapExpression expr_with_t, InvariantDomain domain,
                             std::shared_ptr<const FiniteGroup> group) {
    Otopy h;
    h.group_ = std::move(group);
    h.domain_ = std::move(domain);
    h.expr_ = std::move(expr_with_t);
    return h;
}

EquivariantLocalMap Otopy::slice(const Rat& t) const {
    if (expr_) return EquivariantLocalMap::from_expression(expr_->at_time(t), domain_);
    return EquivariantLocalMap::blend(endpoints_->first, endpoints_->second, t, domain_);
}

} // namespace eqdeg
