#include "doctest.h"

#include <random>

#include "eqdeg/expr.hpp"

using namespace eqdeg;

TEST_CASE("parsing and evaluation") {
    Poly p = Poly::parse("x1^3 - 4*x1", 1, false);
    CHECK(p.eval({2.0}) == 0.0);
    CHECK(p.eval({1.0}) == -3.0);
    CHECK(p.eval_exact({Rat(1, 2)}) == Rat(1, 8) - Rat(2));

    Poly q = Poly::parse("1/2*x1 - 0.25*x2 + 3", 2, false);
    CHECK(q.eval_exact({Rat(2), Rat(4)}) == Rat(3));

    Poly with_t = Poly::parse("x1 - t", 1, true);
    CHECK(with_t.max_var() == 1);
    CHECK(with_t.substitute(1, Poly::constant(Rat(1, 2))).eval({0.5}) == 0.0);

    SUBCASE("errors") {
        CHECK_THROWS_AS(Poly::parse("x3", 2, false), ConfigError);
        CHECK_THROWS_AS(Poly::parse("t", 2, false), ConfigError);
        CHECK_THROWS_AS(Poly::parse("x1^(1/2)", 1, false), ConfigError);
        CHECK_THROWS_AS(Poly::parse("x1 +", 1, false), ConfigError);
        CHECK_THROWS_AS(Poly::parse("y1", 1, false), ConfigError);
        CHECK_THROWS_AS(Poly::parse("(x1", 1, false), ConfigError);
    }

    SUBCASE("unary minus and signs") {
        CHECK(Poly::parse("-x1^2", 1, false).eval({3.0}) == -9.0);
        CHECK(Poly::parse("2 - -3", 1, false).eval({0.0}) == 5.0);
        CHECK(Poly::parse("-1/2", 1, false).eval_exact({Rat(0)}) == Rat(-1, 2));
    }
}

TEST_CASE("symbolic derivatives match finite differences") {
    std::vector<std::string> exprs = {"x1^3 - 4*x1", "x1^5 - 2*x1*x2^2 + x2",
                                      "1/3*x1^2*x2^3 - x1 + 7"};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const double h = 1e-6;
    for (const auto& src : exprs) {
        Poly p = Poly::parse(src, 2, false);
        for (int var = 0; var < 2; ++var) {
            Poly d = p.derivative(var);
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<double> x{coord(rng), coord(rng)};
                std::vector<double> xp = x, xm = x;
                xp[size_t(var)] += h;
                xm[size_t(var)] -= h;
                double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
                double sym = d.eval(x);
                CHECK(std::abs(fd - sym) <= 1e-5 * std::max(1.0, std::abs(sym)));
            }
        }
    }
}

TEST_CASE("map expressions") {
    MapExpression f = MapExpression::parse({"x1 - 1", "x2"}, 2, false);
    Vec x(2);
    x << 1, 0;
    CHECK(f.eval(x).norm() == 0.0);
    CHECK((f.jacobian(x) - Mat::Identity(2, 2)).norm() == 0.0);

    SUBCASE("complex quintic jacobian has determinant |f'|^2") {
        // z^5 - 16 z as a real pair
        MapExpression g = MapExpression::parse(
            {"x1^5 - 10*x1^3*x2^2 + 5*x1*x2^4 - 16*x1",
             "5*x1^4*x2 - 10*x1^2*x2^3 + x2^5 - 16*x2"},
            2, false);
        Vec z(2);
        z << 2, 0;
        CHECK(g.eval(z).norm() == 0.0);
        // f'(2) = 5*16 - 16 = 64, so det Df = 64^2
        CHECK(g.jacobian(z).determinant() == doctest::Approx(4096.0));
    }

    SUBCASE("time blends and slices") {
        MapExpression a = MapExpression::parse({"x1 - 1"}, 1, false);
        MapExpression b = MapExpression::parse({"x1 - 3"}, 1, false);
        MapExpression mid = MapExpression::blend(a, b, Rat(1, 2));
        Vec u(1);
        u << 2;
        CHECK(mid.eval(u)(0) == 0.0);

        MapExpression h = MapExpression::parse({"x1 - 1 - 2*t"}, 1, true);
        CHECK(h.has_t);
        MapExpression slice = h.at_time(Rat(1, 2));
        CHECK(!slice.has_t);
        CHECK(slice.eval(u)(0) == 0.0);
    }
}
