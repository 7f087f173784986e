#include "eqdeg/rational.hpp"

#include <cmath>
#include <sstream>

namespace eqdeg {

Rat rat_from_string(const std::string& token) {
    std::string s = token;
    // strip whitespace
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty numeric token");
    s = s.substr(b, e - b + 1);

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        try {
            BigInt num(s.substr(0, slash));
            BigInt den(s.substr(slash + 1));
            if (den == 0) throw ConfigError("zero denominator in '" + token + "'");
            return Rat(num, den);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse rational '" + token + "'");
        }
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        bool negative = !s.empty() && s[0] == '-';
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.erase(0, 1);
        size_t frac_len = s.size() - dot - 1;
        // strip leading zeros: cpp_int would read them as an octal prefix
        size_t nz = digits.find_first_not_of('0');
        digits = nz == std::string::npos ? "0" : digits.substr(nz);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw ConfigError("cannot parse decimal '" + token + "'");
        BigInt num(digits);
        if (negative) num = -num;
        BigInt den = 1;
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        return Rat(num, den);
    }
    try {
        return Rat(BigInt(s));
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + token + "'");
    }
}

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw Error("non-finite value in exact conversion");
    if (x == 0.0) return Rat(0);
    int exp = 0;
    double m = std::frexp(x, &exp); // x = m * 2^exp, |m| in [0.5, 1)
    // 53 mantissa bits make m * 2^53 integral
    long long mi = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    Rat r(mi);
    if (exp > 0)
        r *= Rat(BigInt(1) << exp);
    else if (exp < 0)
        r /= Rat(BigInt(1) << (-exp));
    return r;
}

double rat_to_double(const Rat& q) { return q.convert_to<double>(); }

std::string rat_to_string(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

std::optional<Rat> rat_exact_sqrt(const Rat& q) {
    if (q < 0) return std::nullopt;
    BigInt num = numerator(q), den = denominator(q);
    BigInt rn = sqrt(num), rd = sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rat(rn, rd);
}

RatMat RatMat::identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMat RatMat::operator*(const RatMat& o) const {
    if (cols_ != o.rows_) throw Error("RatMat product shape mismatch");
    RatMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rat& aik = (*this)(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

RatMat RatMat::operator+(const RatMat& o) const {
    RatMat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

RatMat RatMat::operator-(const RatMat& o) const {
    RatMat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

RatMat RatMat::operator*(const Rat& s) const {
    RatMat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

RatMat RatMat::transposed() const {
    RatMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

bool RatMat::is_zero() const {
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

bool RatMat::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if ((*this)(i, j) != Rat(i == j ? 1 : 0)) return false;
    return true;
}

RatMat RatMat::col(int j) const {
    RatMat c(rows_, 1);
    for (int i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
    return c;
}

std::string RatMat::key() const {
    std::ostringstream os;
    os << rows_ << 'x' << cols_ << ':';
    for (const auto& x : a_) os << x << ',';
    return os.str();
}

Rat dot(const RatMat& a, const RatMat& b) {
    Rat s = 0;
    for (int i = 0; i < a.rows(); ++i) s += a(i, 0) * b(i, 0);
    return s;
}

std::vector<int> rref(RatMat& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int p = -1;
        for (int i = row; i < m.rows(); ++i)
            if (m(i, col) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        Rat inv_piv = Rat(1) / m(row, col);
        for (int j = 0; j < m.cols(); ++j) m(row, j) *= inv_piv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            Rat f = m(i, col);
            for (int j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

RatMat kernel(const RatMat& m) {
    RatMat r = m;
    std::vector<int> pivots = rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;

    int nullity = m.cols() - int(pivots.size());
    RatMat k(m.cols(), nullity);
    int out = 0;
    for (int free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        k(free_col, out) = 1;
        for (size_t pr = 0; pr < pivots.size(); ++pr)
            k(pivots[pr], out) = -r(int(pr), free_col);
        ++out;
    }
    return k;
}

RatMat column_space(const RatMat& m) {
    RatMat r = m;
    std::vector<int> pivots = rref(r);
    RatMat b(m.rows(), int(pivots.size()));
    for (size_t j = 0; j < pivots.size(); ++j)
        for (int i = 0; i < m.rows(); ++i) b(i, int(j)) = m(i, pivots[j]);
    return b;
}

Rat determinant(RatMat m) {
    if (m.rows() != m.cols()) throw Error("determinant of non-square matrix");
    int n = m.rows();
    Rat det = 1;
    for (int col = 0; col < n; ++col) {
        int p = -1;
        for (int i = col; i < n; ++i)
            if (m(i, col) != 0) { p = i; break; }
        if (p < 0) return Rat(0);
        if (p != col) {
            for (int j = 0; j < n; ++j) std::swap(m(p, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        Rat inv_piv = Rat(1) / m(col, col);
        for (int i = col + 1; i < n; ++i) {
            if (m(i, col) == 0) continue;
            Rat f = m(i, col) * inv_piv;
            for (int j = col; j < n; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

RatMat inverse(const RatMat& m) {
    if (m.rows() != m.cols()) throw Singular("inverse of non-square matrix");
    int n = m.rows();
    RatMat aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    std::vector<int> pivots = rref(aug);
    if (int(pivots.size()) != n) throw Singular("matrix is singular");
    RatMat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

RatMat orthogonalize_columns(const RatMat& basis) {
    std::vector<RatMat> cols;
    for (int j = 0; j < basis.cols(); ++j) {
        RatMat v = basis.col(j);
        for (const auto& u : cols) {
            Rat c = dot(u, v) / dot(u, u);
            if (c != 0)
                for (int i = 0; i < v.rows(); ++i) v(i, 0) -= c * u(i, 0);
        }
        if (!v.is_zero()) cols.push_back(v);
    }
    RatMat r(basis.rows(), int(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < basis.rows(); ++i) r(i, int(j)) = cols[j](i, 0);
    return r;
}

RatMat projector_onto(const RatMat& basis) {
    int n = basis.rows();
    if (basis.cols() == 0) return RatMat(n, n); // zero projector
    RatMat at = basis.transposed();
    RatMat gram = at * basis;
    return basis * inverse(gram) * at;
}

} // namespace eqdeg
