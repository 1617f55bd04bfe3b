#include "drham/samples.hpp"

namespace drham {

Rational SampleRng::coeff(int range)
{
    int num = 0;
    while (num == 0) num = uniform(-range, range);
    int den = uniform(1, 3);
    Rational c(num, den);
    c.canonicalize();
    return c;
}

namespace {

Monomial singular_numerator(SampleRng& rng, int n, int degree)
{
    for (;;) {
        Monomial m;
        int deg = 0, zeros = 0, guard = 0;
        while (deg < degree && guard++ < 20) {
            int alpha = rng.uniform(0, n - 1);
            int lo = alpha == 0 ? 2 : 0;
            if (degree - deg < lo) continue;
            int d = rng.uniform(lo, degree - deg);
            if (d == 0 && zeros++ > 0) continue;
            m = m * Monomial::variable({alpha, d});
            deg += d;
        }
        if (deg == degree) return m;
    }
}

/// Polynomial in the underived fields other than v^1, of degree at most one.
DiffPoly transverse(SampleRng& rng, int n, TruncationPolicy policy)
{
    DiffPoly f = DiffPoly::constant(rng.coeff(3), policy);
    if (n > 1 && rng.uniform(0, 1) == 1) f += rng.coeff(3) * DiffPoly::variable({rng.uniform(1, n - 1), 0}, policy);
    return f;
}

TruncationPolicy suite_policy(int i, int instances)
{
    return {i < (instances + 1) / 2 ? 1 : 2, 10};
}

} // namespace

RationalMiura random_singular(SampleRng& rng, int n, TruncationPolicy policy)
{
    std::vector<DiffPoly> images;
    for (int a = 0; a < n; ++a) {
        DiffPoly f = DiffPoly::variable({a, 0}, policy);
        int terms = rng.uniform(1, 2);
        for (int t = 0; t < terms; ++t) {
            int k = rng.uniform(1, policy.max_eps());
            int j = rng.uniform(1, 2);
            Monomial m = singular_numerator(rng, n, k + j).with_exponent(kLaurentVar, -j).with_eps(k);
            f.add_term(m, rng.coeff(3));
        }
        images.push_back(f);
    }
    return RationalMiura(images);
}

MatrixDiffOperator random_hydrodynamic(SampleRng& rng, int n, TruncationPolicy policy)
{
    MatrixDiffOperator k(n, policy);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            DiffPoly g = transverse(rng, n, policy) + transverse(rng, n, policy) * DiffPoly::variable({0, 0}, policy);
            k(a, c).add(1, g);
            DiffPoly b = DiffPoly::constant(rng.coeff(3), policy) * DiffPoly::variable({0, 1}, policy);
            for (int gamma = 1; gamma < n; ++gamma)
                b += transverse(rng, n, policy) * DiffPoly::variable({gamma, 1}, policy);
            k(a, c).add(0, b);
        }
    return k;
}

std::vector<Verdict> singular_subgroup_suite(std::uint64_t seed, int instances)
{
    SampleRng rng(seed);
    std::vector<Verdict> out;
    for (int i = 0; i < instances; ++i) {
        TruncationPolicy policy = suite_policy(i, instances);
        int n = rng.uniform(1, 2);
        RationalMiura a = random_singular(rng, n, policy), b = random_singular(rng, n, policy);
        Verdict v;
        v.check = "singular_subgroup";
        v.subject = "instance " + std::to_string(i + 1) + " (G=" + std::to_string(policy.genus_cap) +
                    ", n=" + std::to_string(n) + ")";
        v.epsilon_order = policy.max_eps();
        auto fail = [&](const std::string& what, const std::string& why) {
            if (!v.ok) return;
            v.ok = false;
            v.entry = what;
            v.witness = why;
        };
        for (const auto& [label, m] : {std::pair<std::string, const RationalMiura*>{"a", &a}, {"b", &b}})
            if (auto bad = purely_singular_violation(*m)) fail(label, "generator is not purely singular: " + *bad);
        if (v.ok) {
            RationalMiura ab = compose_rational(a, b);
            RationalMiura ia = invert_rational(a);
            if (auto bad = purely_singular_violation(ab)) fail("a(b)", *bad);
            if (auto bad = purely_singular_violation(ia)) fail("a^-1", *bad);
            if (compose_rational(a, ia).images() != RationalMiura::identity(n, policy).images())
                fail("a(a^-1)", "composition with the inverse is not the identity");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<Verdict> lemma_s2_suite(std::uint64_t seed, int instances)
{
    SampleRng rng(seed);
    std::vector<Verdict> out;
    for (int i = 0; i < instances; ++i) {
        TruncationPolicy policy = suite_policy(i, instances);
        int n = rng.uniform(1, 2);
        MatrixDiffOperator k = random_hydrodynamic(rng, n, policy);
        PurelySingularMiura m(random_singular(rng, n, policy));
        Verdict v;
        v.check = "lemma_s2";
        v.subject = "instance " + std::to_string(i + 1) + " (G=" + std::to_string(policy.genus_cap) +
                    ", n=" + std::to_string(n) + ")";
        v.epsilon_order = policy.max_eps();
        OperatorMismatch diff = compare(lemma_s2_pushforward(k, m), pol_part(rational_pushforward(k, m.base())));
        if (!diff.equal) {
            v.ok = false;
            v.epsilon_order = diff.eps_order;
            v.entry = "(" + std::to_string(diff.row + 1) + "," + std::to_string(diff.col + 1) + ")";
            v.witness = "closed formula = " + diff.lhs + ", direct = " + diff.rhs;
        }
        out.push_back(v);
    }
    return out;
}

} // namespace drham
