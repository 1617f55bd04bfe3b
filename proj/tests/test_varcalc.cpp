#include "doctest.h"

#include "drham/errors.hpp"
#include "drham/varcalc.hpp"
#include "support.hpp"

using namespace drham;
using namespace drham::testing;

namespace {

// Univariate polynomials in x over Q, used to evaluate densities on concrete
// functions u(x) and integrate them over [0, 1] exactly.
using XPoly = std::vector<Rational>;

XPoly xmul(const XPoly& a, const XPoly& b)
{
    if (a.empty() || b.empty()) return {};
    XPoly c(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

XPoly xadd(XPoly a, const XPoly& b, const Rational& scale = 1)
{
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
    return a;
}

XPoly xderiv(const XPoly& a)
{
    XPoly d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long>(i));
    return d;
}

Rational integrate01(const XPoly& a)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] / static_cast<long>(i + 1);
    return s;
}

/// Evaluates an eps-free density on u^1(x) = fn (single field).
XPoly evaluate(const DiffPoly& f, const XPoly& fn)
{
    std::vector<XPoly> jets{fn};
    XPoly total;
    for (const auto& [m, c] : f.terms()) {
        XPoly term{c};
        for (const auto& [v, e] : m.factors()) {
            while (static_cast<int>(jets.size()) <= v.d) jets.push_back(xderiv(jets.back()));
            for (int i = 0; i < e; ++i) term = xmul(term, jets[v.d]);
        }
        total = xadd(total, term);
    }
    return total;
}

/// d/dt at t = 0 of int_0^1 f(u + t phi) dx, from exact values at t = 0..deg via
/// Newton forward differences. No variational calculus is used.
Rational directional_derivative(const DiffPoly& f, const XPoly& u, const XPoly& phi, int deg)
{
    std::vector<Rational> values;
    for (int t = 0; t <= deg; ++t) values.push_back(integrate01(evaluate(f, xadd(u, phi, t))));
    Rational result = 0;
    std::vector<Rational> diff = values;
    for (int k = 1; k <= deg; ++k) {
        for (int i = 0; i + k <= deg; ++i) diff[i] = diff[i + 1] - diff[i];
        Rational term = diff[0] / k;
        result += (k % 2 == 1) ? term : -term;
    }
    return result;
}

XPoly bump(int a, int b)
{
    // x^a (1 - x)^b, vanishing to high order at both ends
    XPoly p{Rational(1)};
    for (int i = 0; i < a; ++i) p = xmul(p, {Rational(0), Rational(1)});
    for (int i = 0; i < b; ++i) p = xmul(p, {Rational(1), Rational(-1)});
    return p;
}

void check_against_finite_difference(const DiffPoly& density, RandomPolys& rng)
{
    int top = std::max(density.max_order(0), 0);
    XPoly phi = bump(top + 1, top + 2);
    int deg = 0;
    for (const auto& [m, c] : density.terms()) deg = std::max(deg, m.total_degree());
    for (int eps = 0; eps <= density.truncation().max_eps(); ++eps) {
        DiffPoly part = density.eps_coefficient(eps);
        if (part.is_zero()) continue;
        XPoly u{Rational(rng.uniform(-3, 3)), Rational(rng.uniform(-3, 3)), Rational(rng.uniform(-2, 2)) / 3};
        Rational expected = directional_derivative(part, u, phi, deg);
        Rational actual = integrate01(xmul(evaluate(var_derivative(part, 0), u), phi));
        CHECK(expected == actual);
    }
}

} // namespace

TEST_CASE("variational derivative examples")
{
    CHECK(var_derivative(LocalFunctional(P("1/2*u[1,0]^2")), 0) == U(0, 0));
    DiffPoly kdv = P("1/6*u[1,0]^3 + 1/24*eps^2*u[1,0]*u[1,2]");
    CHECK(var_derivative(kdv, 0) == P("1/2*u[1,0]^2 + 1/12*eps^2*u[1,2]"));

    RandomPolys rng(11);
    check_against_finite_difference(kdv, rng);
}

TEST_CASE("variational derivative agrees with the finite-difference oracle")
{
    RandomPolys rng(31337);
    RandomShape s{1, 3, 3, 4, 2, true, 5};
    for (int i = 0; i < 40; ++i) check_against_finite_difference(rng.poly(s), rng);
}

TEST_CASE("image of dx lies in the kernel")
{
    RandomPolys rng(5);
    RandomShape s{2, 3, 3, 4, 2, true, 5};
    for (int i = 0; i < 50; ++i) {
        DiffPoly f = rng.poly(s);
        DiffPoly g = dx(f);
        CHECK(var_derivative(g, 0).is_zero());
        CHECK(var_derivative(g, 1).is_zero());
    }
}

TEST_CASE("local functional equality")
{
    CHECK(equals(LocalFunctional(P("u[1,0]*u[1,2]")), LocalFunctional(P("-u[1,1]^2"))));
    CHECK_FALSE(equals(LocalFunctional(P("u[1,0]")), LocalFunctional(DiffPoly())));
    CHECK(equals(LocalFunctional(P("u[1,0]^2 + 5")), LocalFunctional(P("u[1,0]^2"))));

    RandomPolys rng(17);
    RandomShape s{2, 3, 3, 4, 2, true, 5};
    for (int i = 0; i < 40; ++i) {
        DiffPoly f = rng.poly(s);
        DiffPoly g = rng.poly(s);
        Rational c = rng.coeff(9);
        CHECK(equals(LocalFunctional(f + dx(g)), LocalFunctional(f)));
        LocalFunctional shifted(f + dx(g) + DiffPoly::constant(c));
        CHECK(var_derivative(shifted, 0) == var_derivative(f, 0));
        CHECK(var_derivative(shifted, 1) == var_derivative(f, 1));
    }
}

TEST_CASE("grading operator D")
{
    CHECK(d_operator(LocalFunctional(P("u[1,0]^3"))).density() == P("3*u[1,0]^3"));
    CHECK(d_operator(LocalFunctional(P("u[1,0]*u[1,2]"))).density() == P("4*u[1,0]*u[1,2]"));
    CHECK(d_operator(LocalFunctional(DiffPoly::constant(3))).density().is_zero());
}

TEST_CASE("inverting D - 2")
{
    LocalFunctional cubic(P("1/6*u[1,0]^3"));
    CHECK(solve_d_minus_2(cubic).density() == P("1/6*u[1,0]^3"));

    LocalFunctional disp(P("1/24*eps^2*u[1,0]*u[1,2]"));
    LocalFunctional g = solve_d_minus_2(disp);
    CHECK(g.density() == P("1/48*eps^2*u[1,0]*u[1,2]"));
    CHECK(equals(d_operator(g) - 2 * g, disp));

    CHECK_THROWS_AS(solve_d_minus_2(LocalFunctional(P("u[1,0]^2"))), KernelObstruction);
    try {
        solve_d_minus_2(LocalFunctional(P("u[1,0]^3 + 2*u[1,0]*u[2,0]")));
    } catch (const KernelObstruction& e) {
        CHECK(std::string(e.what()).find("u[1,0] * u[2,0]") != std::string::npos);
    }

    RandomPolys rng(23);
    RandomShape s{2, 3, 4, 5, 2, true, 5};
    for (int i = 0; i < 40; ++i) {
        DiffPoly f = rng.poly(s);
        DiffPoly clean(f.truncation());
        for (const auto& [m, c] : f.terms())
            if (m.weight() != 2) clean.add_term(m, c);
        LocalFunctional h(clean);
        LocalFunctional sol = solve_d_minus_2(h);
        CHECK(equals(d_operator(sol) - 2 * sol, h));
    }
}

TEST_CASE("Euler-type operator")
{
    HomogeneityData trivial{{0}, 0, {0}};
    CHECK(e_hat(U(0, 0), trivial) == U(0, 0));
    CHECK(e_hat(DiffPoly::epsilon(2), trivial) == DiffPoly::epsilon(2));

    HomogeneityData two{{0, 1}, 0, {0, 5}};
    CHECK(e_hat(U(1, 0), two) == DiffPoly::constant(5));

    HomogeneityData hom{{0, Rational(1, 3)}, Rational(1, 3), {1, 0}};
    RandomPolys rng(41);
    RandomShape s{2, 3, 3, 4, 2, true, 5};
    for (int i = 0; i < 50; ++i) {
        DiffPoly f = rng.poly(s), g = rng.poly(s);
        CHECK(e_hat(f * g, hom) == e_hat(f, hom) * g + f * e_hat(g, hom));
    }
}

TEST_CASE("total derivatives are recognised and integrated")
{
    RandomPolys rng(77);
    RandomShape s{2, 3, 3, 4, 2, true, 5};
    for (int i = 0; i < 40; ++i) {
        DiffPoly f = dx(rng.poly(s));
        REQUIRE(var_derivative(f, 0).is_zero());
        auto g = antiderivative(f);
        REQUIRE(g.has_value());
        CHECK(dx(*g) == f);
    }
    CHECK_FALSE(antiderivative(P("u[1,0]^2")).has_value());
    CHECK_FALSE(antiderivative(P("u[1,0]*u[1,1]^2")).has_value());
    CHECK(antiderivative(P("u[1,0]*u[1,1]")).has_value());
}
