#pragma once

// Polynomial expression trees with exact rational coefficients: the carrier
// for map bodies. Evaluation is generic over double and Rat; derivatives are
// symbolic.

#include <memory>
#include <string>
#include <vector>

#include "eqdeg/group.hpp"

namespace eqdeg {

class Poly {
public:
    Poly() : Poly(constant(Rat(0))) {}

    static Poly constant(const Rat& c);
    static Poly variable(int index);

    /// Infix parser over variables x1..xn (plus t when allow_t); operators
    /// + - * ^, integer exponents, integer/decimal/p-q rational literals.
    /// The t variable gets index nvars.
    static Poly parse(const std::string& src, int nvars, bool allow_t);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly pow(int exponent) const;
    Poly scaled(const Rat& c) const { return constant(c) * *this; }

    double eval(const std::vector<double>& xs) const;
    Rat eval_exact(const std::vector<Rat>& xs) const;

    Poly derivative(int var) const;
    Poly substitute(int var, const Poly& value) const;

    bool is_zero() const;
    int max_var() const; // -1 for constants
    std::string str() const;

private:
    enum class Op { constant, variable, add, sub, mul, neg, pow };
    struct Node {
        Op op;
        Rat c;
        double cd = 0; // double mirror of c
        int var = -1;
        int exponent = 0;
        std::shared_ptr<const Node> a, b;
    };
    std::shared_ptr<const Node> root_;
    explicit Poly(std::shared_ptr<const Node> n) : root_(std::move(n)) {}

    template <class T>
    static T eval_node(const Node& n, const std::vector<T>& xs);
    static Poly make(Op op, Poly a, Poly b);
};

/// n-output polynomial map body, optionally time-dependent.
struct MapExpression {
    int inputs = 0;
    int outputs = 0;
    bool has_t = false;
    std::vector<Poly> out;
    std::vector<std::vector<Poly>> jac; // [output][input], filled by finalize()

    static MapExpression parse(const std::vector<std::string>& exprs, int n, bool allow_t);
    static MapExpression from_polys(std::vector<Poly> polys, int n, bool has_t);

    Vec eval(const Vec& x, double t = 0) const;
    std::vector<Rat> eval_exact(const std::vector<Rat>& x, const Rat& t = Rat(0)) const;
    Mat jacobian(const Vec& x, double t = 0) const; // spatial derivatives only

    /// Fix the time variable, producing a plain spatial map.
    MapExpression at_time(const Rat& t) const;

    /// (1-t) a + t b combined symbolically; both spatial.
    static MapExpression blend(const MapExpression& a, const MapExpression& b, const Rat& t);

    void finalize(); // compute jac
};

} // namespace eqdeg
