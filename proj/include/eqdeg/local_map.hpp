#pragma once

// Equivariant local maps: an invariant open domain plus an evaluable body.
// Bodies are polynomial expressions, atom lists, scalings, straight-line
// blends, or disjoint unions; evaluation and Jacobians dispatch on the kind.

#include <memory>
#include <random>
#include <variant>

#include "eqdeg/atoms.hpp"
#include "eqdeg/domain.hpp"
#include "eqdeg/expr.hpp"

namespace eqdeg {

class EquivariantLocalMap;

struct EmptyBody {};
struct ExprBody {
    MapExpression expr;
};
struct AtomBody {
    AtomList atoms;
};
struct ScaledBody {
    std::shared_ptr<const EquivariantLocalMap> base;
    Rat factor;
};
struct BlendBody {
    std::shared_ptr<const EquivariantLocalMap> a, b;
    Rat t;
};
struct UnionBody {
    std::vector<std::shared_ptr<const EquivariantLocalMap>> parts;
};

using MapBody = std::variant<EmptyBody, ExprBody, AtomBody, ScaledBody, BlendBody, UnionBody>;

class EquivariantLocalMap {
public:
    static EquivariantLocalMap empty(std::shared_ptr<const FiniteGroup> group);
    static EquivariantLocalMap from_expression(MapExpression expr, InvariantDomain domain);
    static EquivariantLocalMap from_atoms(AtomList atoms,
                                          std::shared_ptr<const FiniteGroup> group);
    static EquivariantLocalMap scaled(EquivariantLocalMap base, const Rat& factor);
    /// (1-t) a + t b on the given domain (must be contained in both domains).
    static EquivariantLocalMap blend(EquivariantLocalMap a, EquivariantLocalMap b,
                                     const Rat& t, InvariantDomain domain);
    static EquivariantLocalMap from_union(UnionBody parts, InvariantDomain domain,
                                          std::shared_ptr<const FiniteGroup> group);

    Vec evaluate(const Vec& x) const; // throws OutsideDomain
    Mat jacobian(const Vec& x) const;

    /// Exact evaluation; no domain check (callers establish membership).
    std::vector<Rat> evaluate_exact(const std::vector<Rat>& x) const;
    bool exact() const; // exact arithmetic available for the whole body

    bool is_empty() const { return std::holds_alternative<EmptyBody>(body_); }
    const InvariantDomain& domain() const { return domain_; }
    const FiniteGroup& group() const { return *group_; }
    std::shared_ptr<const FiniteGroup> group_ptr() const { return group_; }
    const MapBody& body() const { return body_; }
    const AtomList* atoms() const;

private:
    std::shared_ptr<const FiniteGroup> group_;
    InvariantDomain domain_;
    MapBody body_;
};

struct EquivarianceReport {
    bool pass = true;
    bool exact_checked = false;
    double max_defect = 0;
    int samples_used = 0;
    Vec witness;        // worst point (set when fail)
    int witness_gen = -1;
};

/// Defect max_g ||f(gx) - g f(x)|| over random domain samples and all
/// generators; exact zero required when both group and body are exact.
EquivarianceReport check_equivariance(const EquivariantLocalMap& f, int samples,
                                      unsigned long long seed, double tol_equiv);

struct LocalityReport {
    bool pass = true;
    double margin = 0;
    double min_norm = std::numeric_limits<double>::infinity();
    int shell_samples = 0;
    std::vector<Vec> offenders;
};

/// Grid scan of the margin shell of f's domain: the zero set must stay
/// clear of the boundary (semi-decision at resolution margin/8).
LocalityReport check_locality(const EquivariantLocalMap& f, double margin, double eta_loc);

/// View of f in orthonormal coordinates of a subspace: u -> Q^T f(Q u).
class RestrictedMap {
public:
    RestrictedMap(const EquivariantLocalMap& f, const SubspaceBasis& basis)
        : f_(&f), basis_(&basis) {}

    int dim() const { return basis_->dim(); }
    Vec eval(const Vec& u) const;
    Mat jacobian(const Vec& u) const;
    Vec ambient(const Vec& u) const { return basis_->q * u; }

    /// Checks f maps the subspace into itself at random samples;
    /// throws NotInvariantSubspace.
    void validate(int samples, unsigned long long seed, double tol_equiv) const;

private:
    const EquivariantLocalMap* f_;
    const SubspaceBasis* basis_;
};

/// A path of local maps: slices are blends of two endpoint maps or a
/// time-dependent expression, over a fixed spatial domain.
class Otopy {
public:
    static Otopy between(EquivariantLocalMap a, EquivariantLocalMap b, InvariantDomain domain);
    static Otopy from_expression(MapExpression expr_with_t, InvariantDomain domain,
                                 std::shared_ptr<const FiniteGroup> group);

    EquivariantLocalMap slice(const Rat& t) const;
    const InvariantDomain& domain() const { return domain_; }
    const FiniteGroup& group() const { return *group_; }

private:
    std::shared_ptr<const FiniteGroup> group_;
    InvariantDomain domain_;
    // pair form: endpoints; expression form: body with t
    std::optional<std::pair<EquivariantLocalMap, EquivariantLocalMap>> endpoints_;
    std::optional<MapExpression> expr_;
};

/// Deterministic sampler of points inside a domain (piece-round-robin with
/// rejection). Used by the validation routines.
class DomainSampler {
public:
    DomainSampler(const InvariantDomain& domain, unsigned long long seed);
    /// Next sample; dyadic coordinates so that exact layers stay exact.
    Vec next();

private:
    const InvariantDomain* domain_;
    std::mt19937_64 rng_;
    size_t piece_ = 0;
};

} // namespace eqdeg
