#pragma once

// Shared helpers for the test suites: short constructors and seeded random data.

#include <string_view>
#include <vector>

#include "doctest.h"
#include "drham/diffop.hpp"
#include "drham/ring.hpp"
#include "drham/samples.hpp"

namespace drham::testing {

inline DiffPoly P(std::string_view text, TruncationPolicy policy = {})
{
    return DiffPoly::parse(text, policy);
}

inline DiffPoly U(int alpha, int d, TruncationPolicy policy = {})
{
    return DiffPoly::variable({alpha, d}, policy);
}

inline DiffOperator Dx(int j = 1, TruncationPolicy policy = {})
{
    return DiffOperator::dx_power(j, 1, policy);
}

inline DiffOperator Mul(const DiffPoly& f)
{
    return DiffOperator::multiplication(f);
}

/// Builds a 1x1 matrix operator.
inline MatrixDiffOperator scalar_operator(const DiffOperator& op)
{
    MatrixDiffOperator k(1, op.truncation());
    k(0, 0) = op;
    return k;
}

struct RandomShape {
    int n_fields = 1;
    int max_d = 3;
    int max_factors = 3;
    int max_terms = 4;
    int max_eps = 0;
    bool even_eps_only = true;
    int coeff_range = 5;
};

/// Seeded draws plus random polynomials and operators of a given shape.
class RandomPolys : public SampleRng {
public:
    explicit RandomPolys(std::uint64_t seed) : SampleRng(seed) {}

    Monomial monomial(const RandomShape& s)
    {
        Monomial m;
        int k = uniform(1, s.max_factors);
        for (int i = 0; i < k; ++i) m = m * Monomial::variable({uniform(0, s.n_fields - 1), uniform(0, s.max_d)});
        int e = s.max_eps > 0 ? uniform(0, s.max_eps) : 0;
        if (s.even_eps_only) e -= e % 2;
        return m.with_eps(e);
    }

    DiffPoly poly(const RandomShape& s, TruncationPolicy policy = {})
    {
        DiffPoly f(policy);
        int terms = uniform(1, s.max_terms);
        for (int i = 0; i < terms; ++i) f.add_term(monomial(s), coeff(s.coeff_range));
        return f;
    }

    DiffOperator op(const RandomShape& s, int max_order, TruncationPolicy policy = {})
    {
        DiffOperator a(policy);
        for (int j = 0; j <= max_order; ++j)
            if (uniform(0, 2) != 0) a.add(j, poly(s, policy));
        return a;
    }
};

} // namespace drham::testing

namespace doctest {
template <>
struct StringMaker<drham::DiffPoly> {
    static String convert(const drham::DiffPoly& f) { return f.to_string().c_str(); }
};
} // namespace doctest
