#include "doctest.h"

#include <random>

#include "eqdeg/domain.hpp"
#include "helpers.hpp"

using namespace eqdeg;
using namespace testing_helpers;

TEST_CASE("saturation of an interval under the sign flip") {
    auto omega = domain_s2();
    CHECK(omega.contains(vec1(2)));
    CHECK(omega.contains(vec1(-2.5)));
    CHECK(!omega.contains(vec1(0)));
    CHECK(!omega.contains(vec1(1)));   // open boundary
    CHECK(!omega.contains(vec1(3.5)));
    CHECK(omega.min_feature() == 2.0);
    Box bb = omega.bounding_box();
    CHECK(bb.sides[0].lo == -3.0);
    CHECK(bb.sides[0].hi == 3.0);
}

TEST_CASE("saturation under the trivial group changes nothing") {
    auto omega = InvariantDomain::saturate({box2(0, 1, 0, 2)}, group_trivial(2));
    CHECK(omega.pieces().size() == 1);
    CHECK(omega.contains(vec2(0.5, 1.0)));
    CHECK(!omega.contains(vec2(1.5, 1.0)));
}

TEST_CASE("membership of rotated slabs agrees with the brute-force test") {
    auto omega = domain_s4();
    const FiniteGroup& g = omega.group();
    Box base = box2(1, 3, -1, 1);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-3.5, 3.5);
    for (int i = 0; i < 1000; ++i) {
        Vec x = vec2(coord(rng), coord(rng));
        bool expected = false;
        for (int e = 0; e < g.order() && !expected; ++e)
            expected = base.contains(g.mat(g.inv(e)) * x);
        CHECK(omega.contains(x) == expected);
    }
}

TEST_CASE("invariance: contains(gx) == contains(x)") {
    auto omega = domain_s5();
    const FiniteGroup& g = omega.group();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coord(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        Vec x = vec2(coord(rng), coord(rng));
        bool in = omega.contains(x);
        for (int e = 0; e < g.order(); ++e) CHECK(omega.contains(g.mat(e) * x) == in);
    }
}

TEST_CASE("inward distance lower bound") {
    auto omega = domain_s2();
    CHECK(omega.inward_distance(vec1(2)) == doctest::Approx(1.0));
    CHECK(omega.inward_distance(vec1(1.25)) == doctest::Approx(0.25));
    CHECK(omega.inward_distance(vec1(0)) == 0.0);
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(InvariantDomain::saturate({box1(1, 3)}, group_mirror()),
                    DimensionMismatch);
}

TEST_CASE("hypothesis check") {
    SUBCASE("holds when the origin is excluded") {
        auto omega = domain_s2();
        CHECK(hypothesis_check(omega, omega.group()).holds);
    }
    SUBCASE("holds when the fixed space is positive-dimensional") {
        auto omega = domain_s3(); // contains 0, but dim V^G = 1
        CHECK(hypothesis_check(omega, omega.group()).holds);
    }
    SUBCASE("violated for a free rotation acting on a disc around 0") {
        auto omega = InvariantDomain::saturate({box2(-2, 2, -2, 2)}, group_rot4());
        CHECK(!hypothesis_check(omega, omega.group()).holds);
    }
}

TEST_CASE("ball domains and disjointness") {
    auto g = group_mirror();
    auto orbit = InvariantDomain::orbit_balls({vec2(1, 1)}, {0.25}, g);
    CHECK(orbit.pieces().size() == 2); // the mirror image is distinct
    CHECK(orbit.contains(vec2(1.1, 1.1)));
    CHECK(orbit.contains(vec2(1.1, -1.1)));
    CHECK(!orbit.contains(vec2(0, 0)));

    auto on_axis = InvariantDomain::orbit_balls({vec2(2, 0)}, {0.25}, g);
    CHECK(on_axis.pieces().size() == 1); // fixed by the mirror: image merged

    CHECK(orbit.disjoint_from(on_axis));
    auto overlapping = InvariantDomain::orbit_balls({vec2(1.2, 1.2)}, {0.25}, g);
    CHECK(!orbit.disjoint_from(overlapping));
}
