#include "drham/rational.hpp"

#include "drham/errors.hpp"

namespace drham {

namespace {

int laurent_exponent(const Monomial& m)
{
    return m.exponent(kLaurentVar);
}

std::string entry_label(int row, int col)
{
    return "(" + std::to_string(row + 1) + "," + std::to_string(col + 1) + ")";
}

bool depends_on(const DiffPoly& f, VarIndex v)
{
    for (const auto& [m, c] : f.terms())
        if (m.exponent(v) != 0) return true;
    return false;
}

bool only_underived(const DiffPoly& f)
{
    for (const auto& [m, c] : f.terms()) {
        if (m.eps_power() != 0) return false;
        for (const auto& [v, e] : m.factors())
            if (v.d != 0) return false;
    }
    return true;
}

} // namespace

LaurentDiffPoly LaurentDiffPoly::from_components(const std::map<int, DiffPoly>& components, TruncationPolicy policy)
{
    DiffPoly value(policy);
    for (const auto& [i, p] : components) {
        if (depends_on(p, kLaurentVar))
            throw ValidationError("component " + std::to_string(i) + " depends on v^1_x");
        for (const auto& [m, c] : p.terms())
            value.add_term(m.with_exponent(kLaurentVar, i), c);
    }
    return LaurentDiffPoly(value);
}

std::map<int, DiffPoly> LaurentDiffPoly::components() const
{
    std::map<int, DiffPoly> out;
    for (const auto& [m, c] : value_.terms()) {
        int i = laurent_exponent(m);
        auto [it, inserted] = out.try_emplace(i, DiffPoly(truncation()));
        it->second.add_term(m.with_exponent(kLaurentVar, 0), c);
    }
    return out;
}

DiffPoly pol_part(const DiffPoly& f)
{
    DiffPoly r(f.truncation());
    for (const auto& [m, c] : f.terms())
        if (laurent_exponent(m) >= 0) r.add_term(m, c);
    return r;
}

DiffPoly sing_part(const DiffPoly& f)
{
    DiffPoly r(f.truncation());
    for (const auto& [m, c] : f.terms())
        if (laurent_exponent(m) < 0) r.add_term(m, c);
    return r;
}

PolSingSplit pol_sing_split(const LaurentDiffPoly& f)
{
    return {pol_part(f.value()), LaurentDiffPoly(sing_part(f.value()))};
}

MatrixDiffOperator pol_part(const MatrixDiffOperator& k)
{
    return k.map_coeffs([](const DiffPoly& f) { return pol_part(f); });
}

LaurentDiffPoly dx_laurent(const LaurentDiffPoly& f)
{
    return LaurentDiffPoly(dx(f.value()));
}

// ---------------------------------------------------------------------------

RationalMiura::RationalMiura(std::vector<DiffPoly> images) : images_(std::move(images))
{
    if (images_.empty()) throw ValidationError("a Miura transformation needs at least one field");
    int n = size();
    for (int a = 0; a < n; ++a) {
        require_same_truncation(images_.front(), images_[a]);
        DiffPoly rest = images_[a] - DiffPoly::variable({a, 0}, truncation());
        for (const auto& [m, c] : rest.terms()) {
            if (m.eps_power() == 0)
                throw ValidationError("image " + std::to_string(a + 1) + " is not the identity at eps^0");
            if (m.combined_degree() != 0)
                throw ValidationError("image " + std::to_string(a + 1) + " has a term of degree " +
                                      std::to_string(m.combined_degree()));
            for (const auto& [v, e] : m.factors())
                if (v.alpha >= n) throw ValidationError("image refers to a field beyond N");
        }
    }
}

RationalMiura RationalMiura::identity(int n, TruncationPolicy policy)
{
    std::vector<DiffPoly> images;
    for (int a = 0; a < n; ++a) images.push_back(DiffPoly::variable({a, 0}, policy));
    return RationalMiura(images);
}

std::vector<DiffPoly> RationalMiura::corrections() const
{
    std::vector<DiffPoly> out;
    for (int a = 0; a < size(); ++a) out.push_back(images_[a] - DiffPoly::variable({a, 0}, truncation()));
    return out;
}

RationalMiura compose_rational(const RationalMiura& a, const RationalMiura& b)
{
    if (a.size() != b.size()) throw DimensionMismatch("transformations act on different numbers of fields");
    std::vector<DiffPoly> images;
    for (const auto& f : a.images()) images.push_back(substitute(f, b.images()));
    return RationalMiura(images);
}

RationalMiura invert_rational(const RationalMiura& a)
{
    int n = a.size();
    std::vector<DiffPoly> rest = a.corrections();
    std::vector<DiffPoly> current = RationalMiura::identity(n, a.truncation()).images();
    // every correction carries at least one eps, so each pass fixes one more order
    for (int step = 0; step <= a.truncation().max_eps(); ++step) {
        std::vector<DiffPoly> next;
        for (int k = 0; k < n; ++k)
            next.push_back(DiffPoly::variable({k, 0}, a.truncation()) - substitute(rest[k], current));
        if (next == current) break;
        current = std::move(next);
    }
    return RationalMiura(current);
}

std::optional<std::string> purely_singular_violation(const RationalMiura& m)
{
    std::vector<DiffPoly> rest = m.corrections();
    for (int a = 0; a < m.size(); ++a) {
        if (!pol_part(rest[a]).is_zero())
            return "pol part of image " + std::to_string(a + 1) + " differs from v^" + std::to_string(a + 1);
        if (depends_on(rest[a], {0, 0}))
            return "image " + std::to_string(a + 1) + " depends on v^1 beyond the identity";
    }
    return std::nullopt;
}

PurelySingularMiura::PurelySingularMiura(RationalMiura base) : base_(std::move(base))
{
    if (auto why = purely_singular_violation(base_)) throw ValidationError(*why);
}

std::vector<DiffPoly> PurelySingularMiura::p_vector() const
{
    DiffPoly vx = DiffPoly::variable(kLaurentVar, base_.truncation());
    std::vector<DiffPoly> out;
    for (const auto& f : base_.corrections()) out.push_back(pol_part(vx * f));
    return out;
}

DiffPoly pol_of_substitution(const DiffPoly& f, const PurelySingularMiura& m)
{
    return pol_part(substitute(f, m.images()));
}

// ---------------------------------------------------------------------------

HydrodynamicForm hydrodynamic_form(const MatrixDiffOperator& k)
{
    int n = k.size();
    TruncationPolicy policy = k.truncation();
    HydrodynamicForm out;
    out.n = n;
    out.g.assign(n * n, DiffPoly(policy));
    out.b.assign(n, std::vector<DiffPoly>(n * n, DiffPoly(policy)));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            const DiffOperator& e = k(a, c);
            if (e.order() > 1)
                throw HypothesisViolation("entry " + entry_label(a, c) + " has order " + std::to_string(e.order()));
            DiffPoly g = e.coefficient(1);
            if (!only_underived(g))
                throw HypothesisViolation("dx coefficient of entry " + entry_label(a, c) +
                                          " is not a function of v^*_0");
            out.g[a * n + c] = g;
            DiffPoly zeroth = e.coefficient(0);
            for (const auto& [m, coeff] : zeroth.terms()) {
                int derived = -1;
                bool shape = m.eps_power() == 0;
                for (const auto& [v, ex] : m.factors()) {
                    if (v.d == 0) continue;
                    if (v.d != 1 || ex != 1 || derived >= 0) shape = false;
                    derived = v.alpha;
                }
                if (!shape || derived < 0)
                    throw HypothesisViolation("order-0 coefficient of entry " + entry_label(a, c) +
                                              " is not linear in v^*_x");
                out.b[derived][a * n + c].add_term(m.with_exponent({derived, 1}, 0), coeff);
            }
        }
    return out;
}

MatrixDiffOperator lemma_s2_pushforward(const MatrixDiffOperator& k, const std::vector<DiffPoly>& p)
{
    int n = k.size();
    if (static_cast<int>(p.size()) != n) throw DimensionMismatch("P has the wrong length");
    TruncationPolicy policy = k.truncation();
    HydrodynamicForm form = hydrodynamic_form(k);

    std::vector<DiffPoly> eta(n * n, DiffPoly(policy));
    std::vector<Rational> b1(n * n, Rational(0));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            int i = a * n + c;
            eta[i] = partial(form.g[i], {0, 0});
            if (!partial(eta[i], {0, 0}).is_zero())
                throw HypothesisViolation("d^2 g/(dv^1)^2 is nonzero at entry " + entry_label(a, c));
            for (int gamma = 0; gamma < n; ++gamma)
                if (depends_on(form.b[gamma][i], {0, 0}))
                    throw HypothesisViolation("db_" + std::to_string(gamma + 1) + "/dv^1 is nonzero at entry " +
                                              entry_label(a, c));
            const DiffPoly& b = form.b[0][i];
            for (const auto& [m, coeff] : b.terms())
                if (m.has_factors())
                    throw HypothesisViolation("b_1 is not constant at entry " + entry_label(a, c));
            b1[i] = b.coefficient(Monomial{});
        }

    MatrixDiffOperator out = k;
    DiffOperator d1 = DiffOperator::dx_power(1, 1, policy);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            DiffOperator& e = out(a, c);
            for (int m = 0; m < n; ++m) {
                if (!eta[m * n + c].is_zero())
                    e += compose(l_op(p[a], m, 1), compose(DiffOperator::multiplication(eta[m * n + c]), d1));
                if (b1[m * n + c] != 0) e += b1[m * n + c] * l_op(p[a], m, 0);
                if (b1[a * n + m] != 0) e += b1[a * n + m] * adjoint(l_op(p[c], m, 0));
            }
        }
    return out;
}

MatrixDiffOperator lemma_s2_pushforward(const MatrixDiffOperator& k, const PurelySingularMiura& m)
{
    return lemma_s2_pushforward(k, m.p_vector());
}

MatrixDiffOperator rational_pushforward(const MatrixDiffOperator& k, const RationalMiura& m)
{
    if (k.size() != m.size()) throw DimensionMismatch("operator and transformation sizes differ");
    MatrixDiffOperator j = miura_jacobian(m.images());
    MatrixDiffOperator conj = compose(compose(j, k), matrix_adjoint(j));
    RationalMiura inv = invert_rational(m);
    return conj.map_coeffs([&](const DiffPoly& f) { return substitute(f, inv.images()); });
}

} // namespace drham
