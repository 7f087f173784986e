#pragma once

// Open invariant domains as saturated unions of transformed open boxes and
// balls. Membership is decidable piecewise: x lies in g*B iff g^-1 x lies in B.

#include <limits>
#include <memory>
#include <vector>

#include "eqdeg/group.hpp"

namespace eqdeg {

struct Interval {
    double lo = 0, hi = 0;
};

/// Open axis-aligned box.
struct Box {
    std::vector<Interval> sides;

    int dim() const { return int(sides.size()); }
    double min_edge() const;
    bool contains(const Vec& x) const;      // strict inequalities
    double inward_distance(const Vec& x) const; // <= 0 outside
};

struct DomainPiece {
    enum class Kind { box, ball } kind = Kind::box;
    // box piece: the set g * base
    int g = 0;
    Box base;
    Box bbox; // axis-aligned bound of g * base
    // ball piece, already transformed
    Vec center;
    double radius = 0;
};

class InvariantDomain {
public:
    InvariantDomain() = default;

    /// Closes the box union under the group action.
    static InvariantDomain saturate(const std::vector<Box>& boxes,
                                    std::shared_ptr<const FiniteGroup> group);

    /// G-orbit of balls B(center_i; r_i); duplicate images are merged.
    static InvariantDomain orbit_balls(const std::vector<Vec>& centers,
                                       const std::vector<double>& radii,
                                       std::shared_ptr<const FiniteGroup> group);

    /// Union of two domains over the same group (no disjointness check here).
    static InvariantDomain merge(const InvariantDomain& a, const InvariantDomain& b);

    bool contains(const Vec& x) const;

    /// Lower bound for dist(x, boundary); 0 if x is outside every piece.
    /// Stops early once the bound reaches `enough`.
    double inward_distance(const Vec& x,
                           double enough = std::numeric_limits<double>::infinity()) const;

    Box bounding_box() const;

    /// Smallest base-box edge (or ball radius); drives default resolutions.
    double min_feature() const;

    bool empty() const { return pieces_.empty(); }
    const std::vector<DomainPiece>& pieces() const { return pieces_; }
    const FiniteGroup& group() const { return *group_; }
    std::shared_ptr<const FiniteGroup> group_ptr() const { return group_; }

    /// Conservative pairwise-piece disjointness test against another domain.
    /// Ball pairs are exact; box pairs use separating axes over face normals.
    bool disjoint_from(const InvariantDomain& other) const;

private:
    std::shared_ptr<const FiniteGroup> group_;
    std::vector<DomainPiece> pieces_;
};

struct HypothesisReport {
    bool holds = false;
    std::string reason;
};

/// Classification hypothesis: 0 not in Omega, or dim V^G > 0. When it fails,
/// the fixed point of the whole group at the origin cannot be classified.
HypothesisReport hypothesis_check(const InvariantDomain& omega, const FiniteGroup& g);

} // namespace eqdeg
