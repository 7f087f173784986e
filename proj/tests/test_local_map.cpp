#include "doctest.h"

#include <random>

#include "eqdeg/local_map.hpp"
#include "eqdeg/orbit_types.hpp"
#include "helpers.hpp"

using namespace eqdeg;
using namespace testing_helpers;

namespace {

EquivariantLocalMap map_s2() {
    return EquivariantLocalMap::from_expression(
        MapExpression::parse({"x1^3 - 4*x1"}, 1, false), domain_s2());
}

EquivariantLocalMap map_s3_affine() {
    return EquivariantLocalMap::from_expression(
        MapExpression::parse({"x1 - 1", "x2"}, 2, false), domain_s3());
}

EquivariantLocalMap map_s4_quintic() {
    return EquivariantLocalMap::from_expression(
        MapExpression::parse({"x1^5 - 10*x1^3*x2^2 + 5*x1*x2^4 - 16*x1",
                              "5*x1^4*x2 - 10*x1^2*x2^3 + x2^5 - 16*x2"},
                             2, false),
        domain_s4());
}

} // namespace

TEST_CASE("evaluation and domain gating") {
    auto f = map_s2();
    CHECK(f.evaluate(vec1(2))(0) == 0.0);
    CHECK(f.evaluate(vec1(-2))(0) == 0.0);
    CHECK_THROWS_AS(f.evaluate(vec1(0.5)), OutsideDomain);

    auto g = map_s3_affine();
    CHECK(g.evaluate(vec2(1, 0)).norm() == 0.0);
    CHECK(g.jacobian(vec2(1, 0)) == Mat::Identity(2, 2));

    auto e = EquivariantLocalMap::empty(group_pm1());
    CHECK(e.is_empty());
    CHECK_THROWS_AS(e.evaluate(vec1(2)), OutsideDomain);
}

TEST_CASE("map jacobians: symbolic vs central differences") {
    auto f = map_s4_quintic();
    CHECK(f.jacobian(vec2(2, 0)).determinant() == doctest::Approx(4096.0));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> off(-0.4, 0.4);
    const double h = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        Vec x = vec2(2.0 + off(rng), off(rng));
        if (!f.domain().contains(x)) continue;
        Mat j = f.jacobian(x);
        for (int c = 0; c < 2; ++c) {
            Vec xp = x, xm = x;
            xp(c) += h;
            xm(c) -= h;
            Vec fd = (f.evaluate(xp) - f.evaluate(xm)) / (2 * h);
            for (int r = 0; r < 2; ++r)
                CHECK(std::abs(fd(r) - j(r, c)) <= 1e-5 * std::max(1.0, std::abs(j(r, c))));
        }
    }
}

TEST_CASE("equivariance checks") {
    Tolerances tol;

    SUBCASE("odd cubic under the sign flip: exact pass") {
        auto rep = check_equivariance(map_s2(), 50, 1, tol.tol_equiv);
        CHECK(rep.pass);
        CHECK(rep.exact_checked);
        CHECK(rep.max_defect == 0.0);
    }
    SUBCASE("affine mirror map: exact pass") {
        auto rep = check_equivariance(map_s3_affine(), 50, 2, tol.tol_equiv);
        CHECK(rep.pass);
        CHECK(rep.max_defect == 0.0);
    }
    SUBCASE("even map fails with a witness") {
        auto f = EquivariantLocalMap::from_expression(MapExpression::parse({"x1^2"}, 1, false),
                                                      domain_s2());
        auto rep = check_equivariance(f, 50, 3, tol.tol_equiv);
        CHECK(!rep.pass);
        REQUIRE(rep.witness.size() == 1);
        // defect of x^2 under the flip is 2 x^2 at the witness
        double x = rep.witness(0);
        CHECK(rep.max_defect == doctest::Approx(2 * x * x));
    }
    SUBCASE("defect of generator words grows at most linearly") {
        auto f = map_s4_quintic();
        auto rep = check_equivariance(f, 30, 4, tol.tol_equiv);
        CHECK(rep.pass);
        // spot-check words of length <= 4 directly
        const FiniteGroup& g = f.group();
        DomainSampler sampler(f.domain(), 99);
        for (int s = 0; s < 10; ++s) {
            Vec x = sampler.next();
            int w = 0; // identity
            for (int len = 1; len <= 4; ++len) {
                w = g.mul(w, g.generator_ids()[0]);
                double defect = (f.evaluate(g.mat(w) * x) - g.mat(w) * f.evaluate(x)).norm();
                CHECK(defect <= len * tol.tol_equiv);
            }
        }
    }
}

TEST_CASE("locality checks") {
    Tolerances tol;

    SUBCASE("cubic on the mirrored interval passes at margin 0.2") {
        auto rep = check_locality(map_s2(), 0.2, tol.eta_loc);
        CHECK(rep.pass);
        CHECK(rep.shell_samples > 0);
        // dense 1-d scan oracle over the shell
        double oracle_min = 1e300;
        for (double x = 1.0005; x < 3.0; x += 0.001) {
            if (std::min(x - 1.0, 3.0 - x) <= 0.2)
                oracle_min = std::min(oracle_min, std::abs(x * x * x - 4 * x));
        }
        CHECK(rep.min_norm >= 0.9 * oracle_min);
        CHECK(oracle_min > tol.eta_loc);
    }
    SUBCASE("zero on the boundary fails") {
        auto omega = InvariantDomain::saturate({box1(1, 3)}, group_trivial(1));
        auto f = EquivariantLocalMap::from_expression(MapExpression::parse({"x1 - 3"}, 1, false),
                                                      omega);
        auto rep = check_locality(f, 0.2, tol.eta_loc);
        CHECK(!rep.pass);
        CHECK(!rep.offenders.empty());
        CHECK(std::abs(rep.offenders.front()(0) - 3.0) < 0.25);
    }
    SUBCASE("the empty map is local") {
        auto rep = check_locality(EquivariantLocalMap::empty(group_pm1()), 0.2, tol.eta_loc);
        CHECK(rep.pass);
    }
}

TEST_CASE("restriction to fixed subspaces") {
    Tolerances tol;

    SUBCASE("affine map restricted to the mirror axis is u - 1") {
        auto f = map_s3_affine();
        SubspaceBasis axis = fixed_subspace(f.group(), f.group().full_subgroup());
        RestrictedMap r(f, axis);
        r.validate(30, 5, tol.tol_equiv);
        double sign = axis.q(0, 0); // basis orientation of the axis
        CHECK(r.eval(vec1(sign * 2.0))(0) == doctest::Approx(2.0 - sign * sign * 1.0));
        CHECK(r.jacobian(vec1(sign * 2.0))(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("restriction to the full space is the map itself") {
        auto f = map_s2();
        SubspaceBasis full = fixed_subspace(f.group(), f.group().trivial_subgroup());
        RestrictedMap r(f, full);
        CHECK(r.eval(vec1(2.0) * full.q(0, 0))(0) == doctest::Approx(0.0));
    }
    SUBCASE("quadratic pair restricts to u^2 - 1, matching symbolic substitution") {
        auto f = EquivariantLocalMap::from_expression(
            MapExpression::parse({"x1^2 - 1 - x2^2", "x1*x2"}, 2, false), domain_s3());
        SubspaceBasis axis = fixed_subspace(f.group(), f.group().full_subgroup());
        RestrictedMap r(f, axis);
        r.validate(30, 6, tol.tol_equiv);

        // symbolic route: substitute x = q*u into the components, project by q^T
        Poly fx = Poly::parse("x1^2 - 1 - x2^2", 2, false);
        Rat q0 = rat_from_double(axis.q(0, 0)), q1 = rat_from_double(axis.q(1, 0));
        Poly u = Poly::variable(0);
        Poly sub = fx.substitute(0, u.scaled(q0)).substitute(1, u.scaled(q1));
        for (double uu : {-2.0, -1.0, 0.5, 1.0, 2.5}) {
            double route_a = r.eval(vec1(uu))(0);
            double route_b = rat_to_double(q0) * sub.eval({uu});
            CHECK(route_a == doctest::Approx(route_b).epsilon(1e-12));
            CHECK(route_a == doctest::Approx(uu * uu - 1.0));
        }
    }
    SUBCASE("a non-equivariant map is caught leaving the subspace") {
        auto f = EquivariantLocalMap::from_expression(
            MapExpression::parse({"x1 - 1", "x2 + x1"}, 2, false), domain_s3());
        SubspaceBasis axis = fixed_subspace(f.group(), f.group().full_subgroup());
        RestrictedMap r(f, axis);
        CHECK_THROWS_AS(r.validate(30, 7, tol.tol_equiv), NotInvariantSubspace);
    }
}

TEST_CASE("otopy slices") {
    auto f = map_s2();
    auto g = EquivariantLocalMap::from_expression(
        MapExpression::parse({"x1^3 - 9/2*x1"}, 1, false), domain_s2());
    Otopy h = Otopy::between(f, g, f.domain());
    auto mid = h.slice(Rat(1, 2));
    // (1-t) f + t g at t=1/2: x^3 - 4.25 x, zero at sqrt(4.25)
    double z = std::sqrt(4.25);
    CHECK(mid.evaluate(vec1(z))(0) == doctest::Approx(0.0));
    CHECK(mid.exact());

    Otopy he = Otopy::from_expression(MapExpression::parse({"x1^3 - 4*x1 - t*x1"}, 1, true),
                                      f.domain(), f.group_ptr());
    auto s1 = he.slice(Rat(1, 2));
    CHECK(s1.evaluate(vec1(std::sqrt(4.5)))(0) == doctest::Approx(0.0));
}
