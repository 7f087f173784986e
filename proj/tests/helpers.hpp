#pragma once

// Shared fixtures: the scenario groups and a few brute-force oracles kept
// deliberately independent of the library code paths they check.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "eqdeg/domain.hpp"
#include "eqdeg/group.hpp"

namespace testing_helpers {

using namespace eqdeg;

inline OrthoMatrix exact_matrix(int n, const std::vector<std::string>& entries) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rat_from_string(entries[size_t(i) * n + j]);
    return OrthoMatrix::from_exact(m);
}

// G = {+1, -1} acting on R
inline std::shared_ptr<const FiniteGroup> group_pm1() {
    return std::make_shared<FiniteGroup>(
        FiniteGroup::close_generators({exact_matrix(1, {"-1"})}, 64));
}

// G = <diag(1,-1)> acting on R^2
inline std::shared_ptr<const FiniteGroup> group_mirror() {
    return std::make_shared<FiniteGroup>(
        FiniteGroup::close_generators({exact_matrix(2, {"1", "0", "0", "-1"})}, 64));
}

// G = <rotation by pi/2> acting on R^2
inline std::shared_ptr<const FiniteGroup> group_rot4() {
    return std::make_shared<FiniteGroup>(
        FiniteGroup::close_generators({exact_matrix(2, {"0", "-1", "1", "0"})}, 64));
}

// dihedral group of order 8
inline std::shared_ptr<const FiniteGroup> group_dihedral8() {
    return std::make_shared<FiniteGroup>(FiniteGroup::close_generators(
        {exact_matrix(2, {"0", "-1", "1", "0"}), exact_matrix(2, {"1", "0", "0", "-1"})}, 64));
}

inline std::shared_ptr<const FiniteGroup> group_trivial(int n) {
    std::vector<std::string> id(size_t(n) * n, "0");
    for (int i = 0; i < n; ++i) id[size_t(i) * n + i] = "1";
    return std::make_shared<FiniteGroup>(
        FiniteGroup::close_generators({exact_matrix(n, id)}, 8));
}

// Brute-force group order: distinct products of generator words up to the
// given length, compared exactly.
inline int closure_order_oracle(const std::vector<RatMat>& gens, int max_len) {
    int n = gens[0].rows();
    std::set<std::string> seen{RatMat::identity(n).key()};
    std::vector<RatMat> frontier{RatMat::identity(n)};
    for (int len = 0; len < max_len; ++len) {
        std::vector<RatMat> next;
        for (const auto& w : frontier)
            for (const auto& g : gens) {
                RatMat p = w * g;
                if (seen.insert(p.key()).second) next.push_back(p);
            }
        frontier = std::move(next);
    }
    return int(seen.size());
}

// Normalizer order by direct matrix enumeration.
inline int normalizer_order_oracle(const FiniteGroup& g, const Subgroup& h) {
    int count = 0;
    for (int e = 0; e < g.order(); ++e) {
        std::set<std::string> image, target;
        for (int m : h.members) {
            image.insert((*g.element(g.mul(g.mul(e, m), g.inv(e))).exact).key());
            target.insert((*g.element(m).exact).key());
        }
        if (image == target) ++count;
    }
    return count;
}

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec1(double x) {
    Vec v(1);
    v << x;
    return v;
}

inline Box box1(double lo, double hi) {
    Box b;
    b.sides = {{lo, hi}};
    return b;
}

inline Box box2(double xlo, double xhi, double ylo, double yhi) {
    Box b;
    b.sides = {{xlo, xhi}, {ylo, yhi}};
    return b;
}

// scenario domains
inline InvariantDomain domain_s2() {
    return InvariantDomain::saturate({box1(1, 3)}, group_pm1());
}

inline InvariantDomain domain_s3() {
    return InvariantDomain::saturate({box2(-3, 3, -3, 3)}, group_mirror());
}

inline InvariantDomain domain_s4() {
    return InvariantDomain::saturate({box2(1, 3, -1, 1)}, group_rot4());
}

inline InvariantDomain domain_s5() {
    return InvariantDomain::saturate({box2(1, 3, -3, 3)}, group_dihedral8());
}

} // namespace testing_helpers
