#include "drham/varcalc.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

#include "drham/errors.hpp"

namespace drham {

namespace {

DiffPoly without_constant(const DiffPoly& f)
{
    DiffPoly r(f.truncation());
    for (const auto& [m, c] : f.terms())
        if (m.has_factors()) r.add_term(m, c);
    return r;
}

} // namespace

LocalFunctional::LocalFunctional(DiffPoly density, std::string label)
    : density_(without_constant(density)), label_(std::move(label))
{
}

LocalFunctional operator+(const LocalFunctional& a, const LocalFunctional& b)
{
    return LocalFunctional(a.density_ + b.density_);
}

LocalFunctional operator-(const LocalFunctional& a, const LocalFunctional& b)
{
    return LocalFunctional(a.density_ - b.density_);
}

LocalFunctional operator*(const Rational& c, const LocalFunctional& a)
{
    return LocalFunctional(a.density_ * c);
}

std::vector<Rational> HomogeneityData::mu() const
{
    std::vector<Rational> m;
    for (std::size_t a = 0; a < q.size(); ++a) m.push_back(mu(static_cast<int>(a)));
    return m;
}

DiffPoly var_derivative(const DiffPoly& density, int alpha)
{
    DiffPoly result(density.truncation());
    int top = density.max_order(alpha);
    for (int d = top; d >= 0; --d) {
        // Horner: result = -dx(result) + df/du_d, giving sum (-dx)^d df/du_d
        result = -dx(result) + partial(density, {alpha, d});
    }
    return result;
}

DiffPoly var_derivative(const LocalFunctional& h, int alpha)
{
    return var_derivative(h.density(), alpha);
}

std::vector<DiffPoly> var_gradient(const LocalFunctional& h, int n)
{
    std::vector<DiffPoly> g;
    g.reserve(n);
    for (int a = 0; a < n; ++a) g.push_back(var_derivative(h, a));
    return g;
}

bool equals(const LocalFunctional& a, const LocalFunctional& b)
{
    require_same_truncation(a.density(), b.density());
    DiffPoly diff = a.density() - b.density();
    if (!diff.at_origin().is_zero()) return false;
    int n = diff.field_count();
    for (int alpha = 0; alpha < n; ++alpha)
        if (!var_derivative(diff, alpha).is_zero()) return false;
    return true;
}

LocalFunctional d_operator(const LocalFunctional& h)
{
    DiffPoly r(h.truncation());
    for (const auto& [m, c] : h.density().terms()) r.add_term(m, c * m.weight());
    return LocalFunctional(r, h.label());
}

LocalFunctional solve_d_minus_2(const LocalFunctional& h)
{
    DiffPoly r(h.truncation());
    for (const auto& [m, c] : h.density().terms()) {
        const auto& f = m.factors();
        if (f.size() == 1 && f[0].second == 1 && f[0].first.d >= 1) continue;
        int w = m.weight();
        if (w == 2) {
            DiffPoly witness = DiffPoly::monomial(m, c, h.truncation());
            throw KernelObstruction("monomial " + witness.to_string() + " has D-eigenvalue 2");
        }
        r.add_term(m, c / (w - 2));
    }
    return LocalFunctional(r, h.label());
}

DiffPoly e_hat(const DiffPoly& f, const HomogeneityData& hom)
{
    const TruncationPolicy& policy = f.truncation();
    DiffPoly result(policy);
    Rational eps_factor = (1 - hom.delta) / 2;
    for (const auto& [m, c] : f.terms()) {
        for (const auto& [v, e] : m.factors()) {
            Rational q = v.alpha < static_cast<int>(hom.q.size()) ? hom.q[v.alpha] : Rational(0);
            // (1 - q) u d/du acts on u^e as multiplication by e (1 - q)
            result.add_term(m, c * e * (1 - q));
            if (v.d == 0 && v.alpha < static_cast<int>(hom.r.size()) && hom.r[v.alpha] != 0)
                result.add_term(m.with_exponent(v, e - 1), c * e * hom.r[v.alpha]);
        }
        if (m.eps_power() != 0) result.add_term(m, c * eps_factor * m.eps_power());
    }
    return result;
}

namespace {

// All monomials with the given number of factors per field and total diff degree.
void enumerate_shapes(const std::vector<int>& per_field, int diff_degree, int eps,
                      std::vector<Monomial>& out)
{
    std::function<void(std::size_t, int, int, int, Monomial)> rec =
        [&](std::size_t field, int left_in_field, int min_d, int budget, Monomial acc) {
            if (field == per_field.size()) {
                if (budget == 0) out.push_back(acc.with_eps(eps));
                return;
            }
            if (left_in_field == 0) {
                int next = static_cast<int>(field) + 1;
                int cnt = next < static_cast<int>(per_field.size()) ? per_field[next] : 0;
                rec(field + 1, cnt, 0, budget, acc);
                return;
            }
            for (int d = min_d; d <= budget; ++d) {
                // non-decreasing d within a field gives each multiset once
                VarIndex v{static_cast<int>(field), d};
                rec(field, left_in_field - 1, d, budget - d, acc * Monomial::variable(v));
            }
        };
    if (per_field.empty()) return;
    rec(0, per_field[0], 0, diff_degree, Monomial{});
}

} // namespace

std::optional<DiffPoly> antiderivative(const DiffPoly& f)
{
    const TruncationPolicy& policy = f.truncation();
    if (f.is_zero()) return DiffPoly(policy);
    if (!f.is_polynomial()) throw std::invalid_argument("antiderivative: polynomial input only");

    // dx preserves eps power and the number of factors of each field, and raises
    // the diff degree by one; group f accordingly and solve each block.
    using Key = std::tuple<int, std::vector<int>, int>;
    std::map<Key, DiffPoly> blocks;
    int n = f.field_count();
    for (const auto& [m, c] : f.terms()) {
        std::vector<int> per(n, 0);
        for (const auto& [v, e] : m.factors()) per[v.alpha] += e;
        Key k{m.eps_power(), per, m.diff_degree()};
        auto it = blocks.try_emplace(k, policy).first;
        it->second.add_term(m, c);
    }

    DiffPoly result(policy);
    for (const auto& [key, block] : blocks) {
        const auto& [eps, per, deg] = key;
        if (deg == 0) return std::nullopt;
        std::vector<Monomial> candidates;
        enumerate_shapes(per, deg - 1, eps, candidates);
        std::vector<DiffPoly> images;
        std::map<Monomial, std::size_t, MonomialOrder> rows;
        for (const auto& m : candidates) {
            images.push_back(dx(DiffPoly::monomial(m, 1, policy)));
            for (const auto& [im, ic] : images.back().terms()) rows.try_emplace(im, rows.size());
        }
        for (const auto& [bm, bc] : block.terms())
            if (!rows.count(bm)) return std::nullopt;
        RationalMatrix a(rows.size(), candidates.size());
        std::vector<Rational> b(rows.size(), Rational(0));
        for (std::size_t j = 0; j < images.size(); ++j)
            for (const auto& [im, ic] : images[j].terms()) a(rows.at(im), j) = ic;
        for (const auto& [bm, bc] : block.terms()) b[rows.at(bm)] = bc;
        std::vector<Rational> x;
        if (!solve_linear(a, b, x)) return std::nullopt;
        for (std::size_t j = 0; j < candidates.size(); ++j) result.add_term(candidates[j], x[j]);
    }
    if (!(dx(result) == f)) return std::nullopt;
    return result;
}

} // namespace drham
