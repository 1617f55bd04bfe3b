#include "drham/number.hpp"

#include <cctype>

#include "drham/errors.hpp"

namespace drham {

std::string to_string(const Rational& q)
{
    return q.get_str();
}

Rational parse_rational(std::string_view text)
{
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    std::string token(text.substr(b, e - b));
    if (token.empty()) throw ParseError("empty rational literal");
    if (token.front() == '+') token.erase(0, 1);
    auto slash = token.find('/');
    auto valid_int = [](std::string_view s) {
        if (s.empty()) return false;
        std::size_t i = (s.front() == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!valid_int(token)) throw ParseError("bad rational literal '" + token + "'");
        return Rational(mpz_class(token));
    }
    std::string num = token.substr(0, slash);
    std::string den = token.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den.front() == '-')
        throw ParseError("bad rational literal '" + token + "'");
    mpz_class d(den);
    if (d == 0) throw ParseError("zero denominator in '" + token + "'");
    Rational q(mpz_class(num), d);
    q.canonicalize();
    return q;
}

Rational binomial(long n, long k)
{
    if (k < 0) return 0;
    Rational r = 1;
    for (long i = 0; i < k; ++i) {
        r *= Rational(n - i);
        r /= Rational(i + 1);
    }
    return r;
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0))
{
}

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

bool RationalMatrix::is_symmetric() const
{
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

bool RationalMatrix::is_zero() const
{
    for (const auto& x : data_)
        if (x != 0) return false;
    return true;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b)
{
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shapes");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b)
{
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum shapes");
    RationalMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b)
{
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool invert(const RationalMatrix& m, RationalMatrix& out)
{
    if (m.rows() != m.cols()) return false;
    const std::size_t n = m.rows();
    RationalMatrix a = m;
    out = RationalMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) return false;
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(out(piv, j), out(col, j));
            }
        Rational inv = 1 / a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) *= inv;
            out(col, j) *= inv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col) == 0) continue;
            Rational f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                out(i, j) -= f * out(col, j);
            }
        }
    }
    return true;
}

bool solve_linear(const RationalMatrix& a, const std::vector<Rational>& b, std::vector<Rational>& x)
{
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    if (b.size() != rows) throw DimensionMismatch("rhs length");
    RationalMatrix m(rows, cols + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = a(i, j);
        m(i, cols) = b[i];
    }
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m(piv, c) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j <= cols; ++j) std::swap(m(piv, j), m(r, j));
        Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j <= cols; ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j <= cols; ++j) m(i, j) -= f * m(r, j);
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (m(i, cols) != 0) return false;
    x.assign(cols, Rational(0));
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) x[pivot_cols[i]] = m(i, cols);
    return true;
}

} // namespace drham
