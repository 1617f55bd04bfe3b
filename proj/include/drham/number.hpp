#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace drham {

/// Exact rational scalar used for every coefficient in the engine.
using Rational = mpq_class;

/// "p" or "p/q" in lowest terms.
std::string to_string(const Rational& q);

/// Accepts "p", "-p", "p/q"; whitespace around the token is ignored.
Rational parse_rational(std::string_view text);

/// Generalized binomial coefficient C(n, k) for integer n (possibly negative) and k >= 0.
Rational binomial(long n, long k);

/// Small dense matrix over Q. Used for metrics, their inverses and Jacobians at the origin.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols);

    static RationalMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_symmetric() const;
    bool is_zero() const;

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

    RationalMatrix transpose() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Gauss-Jordan inverse; returns false if the matrix is singular.
bool invert(const RationalMatrix& m, RationalMatrix& out);

/// Solves A x = b exactly. Returns false if inconsistent; free variables are set to 0.
bool solve_linear(const RationalMatrix& a, const std::vector<Rational>& b, std::vector<Rational>& x);

} // namespace drham
