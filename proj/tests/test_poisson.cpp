#include "doctest.h"

#include "drham/errors.hpp"
#include "drham/poisson.hpp"
#include "support.hpp"

using namespace drham;
using namespace drham::testing;

namespace {

SuperDiffPoly Th(int alpha, int d, TruncationPolicy policy = {})
{
    return SuperDiffPoly::odd({alpha, d}, policy);
}

SuperDiffPoly Ev(const DiffPoly& f)
{
    return SuperDiffPoly::even(f);
}

SuperDiffPoly random_super(RandomPolys& rng, const RandomShape& s, int odd_degree, int max_odd_d)
{
    SuperDiffPoly f;
    int terms = rng.uniform(1, 3);
    for (int t = 0; t < terms; ++t) {
        SuperDiffPoly term = Ev(rng.poly(s));
        for (int i = 0; i < odd_degree; ++i) term = term * Th(rng.uniform(0, s.n_fields - 1), rng.uniform(0, max_odd_d));
        f += term;
    }
    return f;
}

/// Random skew operator A - A^dagger.
MatrixDiffOperator random_skew(RandomPolys& rng, const RandomShape& s, int n, int order)
{
    MatrixDiffOperator a(n, {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.op(s, order);
    return a - matrix_adjoint(a);
}

MatrixDiffOperator constant_skew(RandomPolys& rng, int n, int order)
{
    MatrixDiffOperator a(n, {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k <= order; ++k)
                if (rng.uniform(0, 1) == 1) a(i, j).add(k, DiffPoly::constant(rng.coeff(4)));
    return a - matrix_adjoint(a);
}

MatrixDiffOperator kdv_second(TruncationPolicy policy = {})
{
    DiffOperator k = compose(Mul(U(0, 0, policy)), Dx(1, policy)) + Mul(P("1/2*u[1,1]", policy));
    k.add(3, P("1/8*eps^2", policy));
    return scalar_operator(k);
}

bool zero_functional(const SuperDiffPoly& f, int n)
{
    return functional_witness(f, n).zero;
}

/// {{f,g},h} + {{g,h},f} + {{h,f},g}
LocalFunctional jacobi_sum(const LocalFunctional& f, const LocalFunctional& g, const LocalFunctional& h,
                           const MatrixDiffOperator& k)
{
    return bracket(bracket(f, g, k), h, k) + bracket(bracket(g, h, k), f, k) + bracket(bracket(h, f, k), g, k);
}

} // namespace

TEST_CASE("odd variables anticommute and square to zero")
{
    CHECK((Th(0, 0) * Th(0, 0)).is_zero());
    CHECK(Th(0, 1) * Th(0, 0) == Rational(-1) * (Th(0, 0) * Th(0, 1)));
    CHECK(Th(1, 0) * Ev(U(0, 2)) == Ev(U(0, 2)) * Th(1, 0));

    SuperDiffPoly w = Th(0, 0) * Th(0, 1);
    CHECK(dx(w) == Th(0, 0) * Th(0, 2));
    CHECK(dx(Th(0, 0) * Th(0, 1) * Th(0, 2)) == Th(0, 0) * Th(0, 1) * Th(0, 3));

    RandomPolys rng(4242);
    RandomShape s{2, 2, 2, 3, 2, true, 4};
    for (int i = 0; i < 40; ++i) {
        SuperDiffPoly a = random_super(rng, s, 1, 2), b = random_super(rng, s, 2, 2);
        CHECK(a * b == b * a);
        CHECK(a * a == SuperDiffPoly());
        CHECK(dx(a * b) == dx(a) * b + a * dx(b));
    }
}

TEST_CASE("odd variational derivatives vanish exactly on total derivatives")
{
    RandomPolys rng(808);
    RandomShape s{2, 2, 2, 3, 2, true, 4};
    for (int i = 0; i < 30; ++i) {
        SuperDiffPoly f = random_super(rng, s, 3, 2);
        CHECK(zero_functional(dx(f), 2));
        // Euler identity: theta_a delta f / delta theta_a = 3 f modulo dx
        SuperDiffPoly euler;
        for (int a = 0; a < 2; ++a) euler += Th(a, 0) * odd_var_derivative(f, a);
        CHECK(zero_functional(euler - Rational(3) * f, 2));
    }
    CHECK_FALSE(zero_functional(Th(0, 0) * Th(0, 1) * Th(0, 2), 1));
}

TEST_CASE("bivector encoding")
{
    Bivector p = bivector_of(scalar_operator(Dx()));
    CHECK(p.density == Rational(1, 2) * (Th(0, 0) * Th(0, 1)));
    CHECK(bivector_of(MatrixDiffOperator(1, {})).density.is_zero());
    CHECK_THROWS_AS(bivector_of(scalar_operator(compose(Mul(U(0, 0)), Dx()))), NotSkew);
    try {
        bivector_of(scalar_operator(compose(Mul(U(0, 0)), Dx())));
    } catch (const NotSkew& e) {
        CHECK(std::string(e.what()).find("(1,1)") != std::string::npos);
    }

    RandomPolys rng(61);
    RandomShape s{2, 2, 2, 3, 2, true, 4};
    for (int i = 0; i < 25; ++i) {
        MatrixDiffOperator k = random_skew(rng, s, 2, 3);
        CHECK(operator_of(bivector_of(k), 2) == k);
    }
}

TEST_CASE("Schouten bracket on hand-expanded examples")
{
    // dispersionless second KdV structure: the trivector density is 1/4 u_1 theta theta theta_1 = 0
    MatrixDiffOperator k0 = scalar_operator(compose(Mul(U(0, 0)), Dx()) + Mul(P("1/2*u[1,1]")));
    Bivector p0 = bivector_of(k0);
    CHECK(schouten(p0, p0).is_zero());

    // with the eps^2/8 dx^3 term the density is eps^2/16 theta theta_1 theta_3 = dx(eps^2/16 theta theta_1 theta_2)
    Bivector p = bivector_of(kdv_second());
    SuperDiffPoly t = schouten(p, p);
    CHECK(t == Ev(P("1/16*eps^2")) * Th(0, 0) * Th(0, 1) * Th(0, 3));
    CHECK(t == dx(Ev(P("1/16*eps^2")) * Th(0, 0) * Th(0, 1) * Th(0, 2)));
}

TEST_CASE("Poisson verdicts")
{
    RationalMatrix eta_inv(2, 2);
    eta_inv(0, 1) = 1;
    eta_inv(1, 0) = 1;
    CHECK(is_poisson(MatrixDiffOperator::constant(eta_inv, 1, {})).ok);
    CHECK(is_poisson(kdv_second()).ok);

    Verdict bad = is_poisson(scalar_operator(compose(Mul(U(0, 0)), Dx()) + Mul(U(0, 1))));
    CHECK_FALSE(bad.ok);
    CHECK(bad.witness.find("not skew") != std::string::npos);

    RandomPolys rng(5150);
    for (int i = 0; i < 20; ++i) CHECK(is_poisson(constant_skew(rng, 2, 3)).ok);
}

TEST_CASE("a skew operator that is not Poisson")
{
    // (u_1 dx + dx u_1) is skew, but its Schouten square survives modulo dx
    MatrixDiffOperator k = scalar_operator(compose(Mul(U(0, 1)), Dx()) + compose(Dx(), Mul(U(0, 1))));
    Verdict v = is_poisson(k);
    CHECK_FALSE(v.ok);
    CHECK(v.epsilon_order == 0);
    CHECK_FALSE(v.witness.empty());
}

TEST_CASE("compatibility verdicts")
{
    MatrixDiffOperator k1 = scalar_operator(Dx());
    CHECK(is_compatible(k1, Rational(3) * k1).ok);
    CHECK(is_compatible(k1, kdv_second()).ok);

    // u_1 dx + dx u_1 is not even Poisson; the mixed bracket with dx still vanishes,
    // while pairing with the second KdV structure does not
    MatrixDiffOperator k = scalar_operator(compose(Mul(U(0, 1)), Dx()) + compose(Dx(), Mul(U(0, 1))));
    CHECK_FALSE(is_compatible(kdv_second(), k).ok);
}

TEST_CASE("Schouten pairing is symmetric and the pencil expands quadratically")
{
    RandomPolys rng(97);
    RandomShape s{2, 2, 2, 2, 0, true, 3};
    for (int i = 0; i < 12; ++i) {
        MatrixDiffOperator k1 = random_skew(rng, s, 2, 2);
        MatrixDiffOperator k2 = random_skew(rng, s, 2, 2);
        Bivector p1 = bivector_of(k1), p2 = bivector_of(k2);
        SuperDiffPoly mixed = schouten(p1, p2);
        CHECK(mixed == schouten(p2, p1));
        SuperDiffPoly t11 = schouten(p1, p1), t22 = schouten(p2, p2);
        for (int num = -2; num <= 2; ++num) {
            Rational lambda(num, 3);
            lambda.canonicalize();
            Bivector pl = bivector_of(k2 - lambda * k1);
            SuperDiffPoly expect = t22 - Rational(2) * lambda * mixed + lambda * lambda * t11;
            CHECK(schouten(pl, pl) == expect);
        }
    }
}

TEST_CASE("Schouten criterion agrees with sampled Jacobi sums")
{
    RandomPolys rng(1234);
    RandomShape s{1, 2, 3, 3, 0, true, 3};
    std::vector<LocalFunctional> samples;
    for (int i = 0; i < 6; ++i) samples.emplace_back(rng.poly(s));

    MatrixDiffOperator kdv = kdv_second();
    MatrixDiffOperator bad = scalar_operator(compose(Mul(U(0, 1)), Dx()) + compose(Dx(), Mul(U(0, 1))));
    REQUIRE(is_poisson(kdv).ok);
    REQUIRE_FALSE(is_poisson(bad).ok);

    bool bad_detected = false;
    for (std::size_t i = 0; i + 2 < samples.size(); ++i) {
        const auto& f = samples[i];
        const auto& g = samples[i + 1];
        const auto& h = samples[i + 2];
        CHECK(equals(jacobi_sum(f, g, h, kdv), LocalFunctional()));
        if (!equals(jacobi_sum(f, g, h, bad), LocalFunctional())) bad_detected = true;
    }
    CHECK(bad_detected);
}
