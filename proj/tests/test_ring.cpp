#include "doctest.h"

#include "drham/errors.hpp"
#include "support.hpp"

using namespace drham;
using namespace drham::testing;

TEST_CASE("arithmetic examples")
{
    DiffPoly u = U(0, 0);
    DiffPoly eps = DiffPoly::epsilon(1);
    CHECK((u + eps) * (u - eps) == P("u[1,0]^2 - eps^2"));

    TruncationPolicy m1{1, 1};
    CHECK((U(0, 0, m1) * U(0, 0, m1)).is_zero());

    DiffPoly a = P("u[1,1]^2 + u[1,0]*u[1,2]");
    CHECK(a + P("-u[1,0]*u[1,2]") == P("u[1,1]^2"));

    CHECK((P("3*u[1,0]") * Rational(1, 3)) == u);
}

TEST_CASE("policies must agree")
{
    TruncationPolicy other{2, 6};
    CHECK_THROWS_AS(U(0, 0) + U(0, 0, other), TruncationMismatch);
    CHECK_THROWS_AS(U(0, 0) * U(0, 0, other), TruncationMismatch);
}

TEST_CASE("genus cap drops high eps powers")
{
    TruncationPolicy g0{0, 6};
    CHECK(P("u[1,0] + eps^2*u[1,2]", g0) == P("u[1,0]", g0));
    DiffPoly e = DiffPoly::epsilon(1);
    CHECK(pow(e, 3).is_zero());
    CHECK(pow(e, 2) == DiffPoly::epsilon(2));
}

TEST_CASE("partial derivatives")
{
    CHECK(partial(P("u[1,0]*u[1,2]"), {0, 2}) == U(0, 0));
    CHECK(partial(P("u[1,1]^3"), {0, 1}) == P("3*u[1,1]^2"));
    CHECK(partial(P("eps^2*u[2,0]"), {0, 0}).is_zero());
}

TEST_CASE("total derivative")
{
    CHECK(dx(P("u[1,0]*u[1,1]")) == P("u[1,1]^2 + u[1,0]*u[1,2]"));
    CHECK(dx(DiffPoly::constant(7)).is_zero());
    CHECK(dx(P("1/6*u[1,0]^3")) == P("1/2*u[1,0]^2*u[1,1]"));
    CHECK(dx(P("u[1,0]"), 3) == U(0, 3));
}

TEST_CASE("grading")
{
    auto g = grading(P("u[1,1]^2 + u[1,0]*u[1,2]"));
    CHECK(g.diff_degrees == std::set<int>{2});
    CHECK(g.homogeneous);
    CHECK(*g.combined_degrees.begin() == 2);

    auto h = grading(P("eps^2*u[1,2]"));
    CHECK(h.combined_degrees == std::set<int>{0});

    CHECK_FALSE(grading(P("u[1,0] + u[1,1]")).homogeneous);
}

TEST_CASE("canonical text form")
{
    DiffPoly f = P("u[1,2]*u[1,0] + 1/24*eps^2*u[1,2] - 2/3*u[2,0]^2*u[1,0]");
    CHECK(f.to_string() == "-2/3 * u[1,0] * u[2,0]^2 + 1 * u[1,0] * u[1,2] + 1/24 * eps^2 * u[1,2]");
    CHECK(DiffPoly::parse(f.to_string()) == f);
    CHECK(DiffPoly().to_string() == "0");
    CHECK_THROWS_AS(P("u[1,0] +"), ParseError);
    CHECK_THROWS_AS(P("u[0,0]"), ParseError);
    CHECK_THROWS_AS(P("2 * v[1,0]"), ParseError);

    DiffPoly laurent = P("u[2,2] * vx1^(-1) + u[2,0] * u[1,1]");
    CHECK(DiffPoly::parse(laurent.to_string()) == laurent);
    CHECK_FALSE(laurent.is_polynomial());
}

TEST_CASE("pretty printing")
{
    CHECK(pretty(P("1/6*u[1,0]^3 + 1/48*eps^2*u[1,0]*u[1,2]")) == "1/6*u^3 + 1/48*eps^2*u*u_2");
    PrettyStyle two{2, "u", false};
    CHECK(pretty(P("-u[1,0]*u[2,1] + 2"), two) == "-u1*u2_1 + 2");
    PrettyStyle tex{1, "u", true};
    CHECK(pretty(P("1/8*eps^2*u[1,3]"), tex) == "\\frac{1}{8} \\varepsilon^{2} u_{3}");
}

TEST_CASE("substitution")
{
    // u -> u + eps*u_1 applied to u*u_1
    std::vector<DiffPoly> img{P("u[1,0] + eps*u[1,1]")};
    DiffPoly f = P("u[1,0]*u[1,1]");
    CHECK(substitute(f, img) == P("u[1,0]*u[1,1] + eps*u[1,1]^2 + eps*u[1,0]*u[1,2] + eps^2*u[1,1]*u[1,2]"));

    // negative powers of u^1_1 expand binomially
    TruncationPolicy g1{1, 6};
    std::vector<DiffPoly> shift{P("u[1,0] + eps*u[1,0]", g1)};
    DiffPoly inv = P("vx1^(-1)", g1);
    CHECK(substitute(inv, shift) == P("vx1^(-1) - eps*vx1^(-1) + eps^2*vx1^(-1)", g1));
}

TEST_CASE("ring axioms on random samples")
{
    RandomPolys rng(20240611);
    RandomShape s{2, 3, 3, 4, 2, false, 6};
    for (int i = 0; i < 60; ++i) {
        DiffPoly a = rng.poly(s), b = rng.poly(s), c = rng.poly(s);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (b - a) == b);
    }
}

TEST_CASE("dx commutes with partial up to the lower jet")
{
    RandomPolys rng(7);
    RandomShape s{2, 3, 3, 5, 2, true, 4};
    for (int i = 0; i < 60; ++i) {
        DiffPoly f = rng.poly(s);
        VarIndex v{rng.uniform(0, 1), rng.uniform(0, 4)};
        DiffPoly lhs = dx(partial(f, v)) - partial(dx(f), v);
        DiffPoly rhs = v.d == 0 ? DiffPoly() : -partial(f, {v.alpha, v.d - 1});
        CHECK(lhs == rhs);
    }
}

TEST_CASE("products of homogeneous elements stay homogeneous")
{
    DiffPoly f = P("u[1,1]^2 + u[1,0]*u[1,2] + eps*u[1,3]");
    DiffPoly g = P("u[2,0]*u[1,1] + eps^2*u[2,3]");
    REQUIRE(grading(f).homogeneous);
    REQUIRE(grading(g).homogeneous);
    auto fg = grading(f * g);
    CHECK(fg.homogeneous);
    CHECK(*fg.combined_degrees.begin() == 3);
}

TEST_CASE("serialization round trip on random samples")
{
    RandomPolys rng(99);
    RandomShape s{3, 4, 4, 6, 2, false, 9};
    for (int i = 0; i < 80; ++i) {
        DiffPoly f = rng.poly(s);
        CHECK(DiffPoly::parse(f.to_string()) == f);
    }
}
