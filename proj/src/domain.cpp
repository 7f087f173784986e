#include "eqdeg/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eqdeg {

double Box::min_edge() const {
    double e = std::numeric_limits<double>::infinity();
    for (const auto& s : sides) e = std::min(e, s.hi - s.lo);
    return e;
}

bool Box::contains(const Vec& x) const {
    for (int i = 0; i < dim(); ++i)
        if (!(x(i) > sides[i].lo && x(i) < sides[i].hi)) return false;
    return true;
}

double Box::inward_distance(const Vec& x) const {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim(); ++i)
        d = std::min(d, std::min(x(i) - sides[i].lo, sides[i].hi - x(i)));
    return std::max(d, 0.0);
}

namespace {

bool piece_contains(const FiniteGroup& g, const DomainPiece& p, const Vec& x) {
    if (p.kind == DomainPiece::Kind::ball) return (x - p.center).norm() < p.radius;
    for (int i = 0; i < x.size(); ++i) // cheap reject before the rotation
        if (x(i) <= p.bbox.sides[size_t(i)].lo || x(i) >= p.bbox.sides[size_t(i)].hi)
            return false;
    Vec local = g.mat(g.inv(p.g)) * x;
    return p.base.contains(local);
}

double piece_inward(const FiniteGroup& g, const DomainPiece& p, const Vec& x) {
    if (p.kind == DomainPiece::Kind::ball)
        return std::max(p.radius - (x - p.center).norm(), 0.0);
    for (int i = 0; i < x.size(); ++i)
        if (x(i) <= p.bbox.sides[size_t(i)].lo || x(i) >= p.bbox.sides[size_t(i)].hi)
            return 0.0;
    Vec local = g.mat(g.inv(p.g)) * x;
    if (!p.base.contains(local)) return 0.0;
    return p.base.inward_distance(local);
}

// axis-aligned bounding box of one piece
Box piece_bbox(const FiniteGroup& g, const DomainPiece& p) {
    const int n = g.dim();
    Box b;
    b.sides.resize(n);
    if (p.kind == DomainPiece::Kind::ball) {
        for (int i = 0; i < n; ++i)
            b.sides[i] = {p.center(i) - p.radius, p.center(i) + p.radius};
        return b;
    }
    // image of an axis box under the orthogonal map: interval arithmetic per row
    const Mat& r = g.mat(p.g);
    for (int i = 0; i < n; ++i) {
        double lo = 0, hi = 0;
        for (int j = 0; j < n; ++j) {
            double a = r(i, j) * p.base.sides[j].lo;
            double b2 = r(i, j) * p.base.sides[j].hi;
            lo += std::min(a, b2);
            hi += std::max(a, b2);
        }
        b.sides[i] = {lo, hi};
    }
    return b;
}

// Separating-axis test over the face normals of both boxes. Finding an axis
// proves disjointness; not finding one is treated as overlap (conservative).
bool boxes_disjoint_sat(const FiniteGroup& g, const DomainPiece& a, const DomainPiece& b) {
    const int n = g.dim();
    const Mat& ra = g.mat(a.g);
    const Mat& rb = g.mat(b.g);
    auto project = [&](const Mat& rot, const Box& box, const Vec& axis, double& lo, double& hi) {
        // support of rot*box along axis
        Vec local_axis = rot.transpose() * axis;
        lo = hi = 0;
        for (int j = 0; j < int(box.sides.size()); ++j) {
            double p1 = local_axis(j) * box.sides[j].lo;
            double p2 = local_axis(j) * box.sides[j].hi;
            lo += std::min(p1, p2);
            hi += std::max(p1, p2);
        }
    };
    for (int src = 0; src < 2; ++src) {
        const Mat& rot = src == 0 ? ra : rb;
        for (int i = 0; i < n; ++i) {
            Vec axis = rot.col(i);
            double alo, ahi, blo, bhi;
            project(ra, a.base, axis, alo, ahi);
            project(rb, b.base, axis, blo, bhi);
            if (ahi <= blo || bhi <= alo) return true;
        }
    }
    return false;
}

bool pieces_disjoint(const FiniteGroup& g, const DomainPiece& a, const DomainPiece& b) {
    using K = DomainPiece::Kind;
    if (a.kind == K::ball && b.kind == K::ball)
        return (a.center - b.center).norm() >= a.radius + b.radius;
    if (a.kind == K::box && b.kind == K::box) return boxes_disjoint_sat(g, a, b);
    const DomainPiece& ball = a.kind == K::ball ? a : b;
    const DomainPiece& box = a.kind == K::ball ? b : a;
    Vec local = g.mat(g.inv(box.g)) * ball.center;
    double d2 = 0;
    for (int i = 0; i < int(box.base.sides.size()); ++i) {
        double c = std::clamp(local(i), box.base.sides[i].lo, box.base.sides[i].hi);
        d2 += (local(i) - c) * (local(i) - c);
    }
    return std::sqrt(d2) >= ball.radius;
}

} // namespace

InvariantDomain InvariantDomain::saturate(const std::vector<Box>& boxes,
                                          std::shared_ptr<const FiniteGroup> group) {
    if (boxes.empty()) throw EmptyDomain("saturate: no boxes");
    InvariantDomain d;
    d.group_ = std::move(group);
    for (const auto& b : boxes) {
        if (b.dim() != d.group_->dim())
            throw DimensionMismatch("box dimension differs from the representation");
        for (const auto& s : b.sides)
            if (!(s.hi > s.lo)) throw ConfigError("degenerate box side");
        for (int g = 0; g < d.group_->order(); ++g) {
            DomainPiece p;
            p.kind = DomainPiece::Kind::box;
            p.g = g;
            p.base = b;
            p.bbox = piece_bbox(*d.group_, p);
            d.pieces_.push_back(std::move(p));
        }
    }
    return d;
}

InvariantDomain InvariantDomain::orbit_balls(const std::vector<Vec>& centers,
                                             const std::vector<double>& radii,
                                             std::shared_ptr<const FiniteGroup> group) {
    InvariantDomain d;
    d.group_ = std::move(group);
    for (size_t i = 0; i < centers.size(); ++i) {
        for (int g = 0; g < d.group_->order(); ++g) {
            Vec c = d.group_->mat(g) * centers[i];
            bool dup = false;
            for (const auto& p : d.pieces_)
                if (p.kind == DomainPiece::Kind::ball && (p.center - c).norm() <= 1e-12 &&
                    std::abs(p.radius - radii[i]) <= 1e-15) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            DomainPiece p;
            p.kind = DomainPiece::Kind::ball;
            p.center = std::move(c);
            p.radius = radii[i];
            d.pieces_.push_back(std::move(p));
        }
    }
    return d;
}

InvariantDomain InvariantDomain::merge(const InvariantDomain& a, const InvariantDomain& b) {
    InvariantDomain d;
    d.group_ = a.group_ ? a.group_ : b.group_;
    d.pieces_ = a.pieces_;
    d.pieces_.insert(d.pieces_.end(), b.pieces_.begin(), b.pieces_.end());
    return d;
}

bool InvariantDomain::contains(const Vec& x) const {
    for (const auto& p : pieces_)
        if (piece_contains(*group_, p, x)) return true;
    return false;
}

double InvariantDomain::inward_distance(const Vec& x, double enough) const {
    double d = 0;
    for (const auto& p : pieces_) {
        d = std::max(d, piece_inward(*group_, p, x));
        if (d >= enough) return d;
    }
    return d;
}

Box InvariantDomain::bounding_box() const {
    if (pieces_.empty()) throw EmptyDomain("bounding box of empty domain");
    Box acc = piece_bbox(*group_, pieces_[0]);
    for (size_t i = 1; i < pieces_.size(); ++i) {
        Box b = piece_bbox(*group_, pieces_[i]);
        for (int j = 0; j < acc.dim(); ++j) {
            acc.sides[j].lo = std::min(acc.sides[j].lo, b.sides[j].lo);
            acc.sides[j].hi = std::max(acc.sides[j].hi, b.sides[j].hi);
        }
    }
    return acc;
}

double InvariantDomain::min_feature() const {
    double f = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_)
        f = std::min(f, p.kind == DomainPiece::Kind::ball ? p.radius : p.base.min_edge());
    return f;
}

bool InvariantDomain::disjoint_from(const InvariantDomain& other) const {
    for (const auto& a : pieces_)
        for (const auto& b : other.pieces_)
            if (!pieces_disjoint(*group_, a, b)) return false;
    return true;
}

HypothesisReport hypothesis_check(const InvariantDomain& omega, const FiniteGroup& g) {
    HypothesisReport r;
    Vec origin = Vec::Zero(g.dim());
    if (!omega.contains(origin)) {
        r.holds = true;
        r.reason = "0 not in the domain";
        return r;
    }
    SubspaceBasis vg = fixed_subspace(g, g.full_subgroup());
    if (vg.dim() > 0) {
        r.holds = true;
        r.reason = "dim V^G = " + std::to_string(vg.dim()) + " > 0";
        return r;
    }
    r.holds = false;
    r.reason = "0 lies in the domain and dim V^G = 0";
    return r;
}

} // namespace eqdeg
