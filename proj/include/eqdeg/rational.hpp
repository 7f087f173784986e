#pragma once

// Exact rational scalar and the small dense linear algebra used for the
// exact layer of group computations. Matrices here are tiny (the ambient
// dimension), so plain Gaussian elimination over the rationals is enough.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

#include "eqdeg/errors.hpp"

namespace eqdeg {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parse "p/q", an integer, or a decimal literal ("-4.25") into an exact rational.
Rat rat_from_string(const std::string& token);

/// Exact conversion; every finite double is a dyadic rational.
Rat rat_from_double(double x);

double rat_to_double(const Rat& q);

/// Shortest exact string form, "p" or "p/q".
std::string rat_to_string(const Rat& q);

/// sqrt(q) if q is a perfect square of a rational, nullopt otherwise.
std::optional<Rat> rat_exact_sqrt(const Rat& q);

/// Dense row-major rational matrix.
class RatMat {
public:
    RatMat() = default;
    RatMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    static RatMat identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Rat& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    bool operator==(const RatMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    RatMat operator*(const RatMat& o) const;
    RatMat operator+(const RatMat& o) const;
    RatMat operator-(const RatMat& o) const;
    RatMat operator*(const Rat& s) const;
    RatMat transposed() const;

    bool is_zero() const;
    bool is_identity() const;

    RatMat col(int j) const;

    /// Stable key for hashing/map lookup of exact matrices.
    std::string key() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

Rat dot(const RatMat& a, const RatMat& b); // column vectors

/// Reduced row echelon form (in place); returns pivot column indices.
std::vector<int> rref(RatMat& m);

/// Columns spanning the kernel of m (exact).
RatMat kernel(const RatMat& m);

/// Columns spanning the column space of m: the pivot columns of m.
RatMat column_space(const RatMat& m);

Rat determinant(RatMat m);

/// Inverse of a square nonsingular matrix; throws Singular.
RatMat inverse(const RatMat& m);

/// Gram-Schmidt without normalization: columns stay rational, pairwise orthogonal.
/// Zero columns that appear along the way are dropped.
RatMat orthogonalize_columns(const RatMat& basis);

/// Orthogonal projector A (A^T A)^{-1} A^T onto the column space of A.
RatMat projector_onto(const RatMat& basis);

} // namespace eqdeg
