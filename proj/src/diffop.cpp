#include "drham/diffop.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "drham/errors.hpp"

namespace drham {

// ---------------------------------------------------------------------------
// DiffOperator

DiffOperator DiffOperator::multiplication(const DiffPoly& f)
{
    DiffOperator op(f.truncation());
    op.add(0, f);
    return op;
}

DiffOperator DiffOperator::dx_power(int j, const Rational& c, TruncationPolicy policy)
{
    DiffOperator op(policy);
    op.add(j, DiffPoly::constant(c, policy));
    return op;
}

DiffPoly DiffOperator::coefficient(int j) const
{
    auto it = coeffs_.find(j);
    return it == coeffs_.end() ? DiffPoly(policy_) : it->second;
}

void DiffOperator::add(int order, const DiffPoly& f)
{
    if (order < 0) throw std::invalid_argument("negative operator order");
    if (f.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(order, f);
    if (!inserted) {
        it->second += f;
        if (it->second.is_zero()) coeffs_.erase(it);
    } else {
        require_same_truncation(DiffPoly(policy_), f);
    }
}

DiffPoly DiffOperator::apply(const DiffPoly& f) const
{
    DiffPoly result(policy_);
    if (coeffs_.empty()) return result;
    DiffPoly deriv = f;
    int j = 0;
    for (const auto& [order, c] : coeffs_) {
        while (j < order) {
            deriv = dx(deriv);
            ++j;
        }
        result += c * deriv;
    }
    return result;
}

DiffOperator& DiffOperator::operator+=(const DiffOperator& other)
{
    for (const auto& [j, c] : other.coeffs_) add(j, c);
    return *this;
}

DiffOperator& DiffOperator::operator-=(const DiffOperator& other)
{
    for (const auto& [j, c] : other.coeffs_) add(j, -c);
    return *this;
}

DiffOperator& DiffOperator::operator*=(const Rational& c)
{
    if (c == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [j, f] : coeffs_) f *= c;
    return *this;
}

bool operator==(const DiffOperator& a, const DiffOperator& b)
{
    return a.policy_ == b.policy_ && a.coeffs_ == b.coeffs_;
}

DiffOperator DiffOperator::map_coeffs(const std::function<DiffPoly(const DiffPoly&)>& fn) const
{
    DiffOperator r(policy_);
    for (const auto& [j, f] : coeffs_) r.add(j, fn(f));
    return r;
}

DiffOperator DiffOperator::eps_coefficient(int k) const
{
    return map_coeffs([k](const DiffPoly& f) { return f.eps_coefficient(k); });
}

DiffOperator DiffOperator::with_truncation(TruncationPolicy policy) const
{
    DiffOperator r(policy);
    for (const auto& [j, f] : coeffs_) r.add(j, f.with_truncation(policy));
    return r;
}

std::string DiffOperator::to_string() const
{
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [j, f] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << f.to_string() << ") * Dx^" << j;
    }
    return os.str();
}

DiffOperator compose(const DiffOperator& a, const DiffOperator& b)
{
    require_same_truncation(DiffPoly(a.truncation()), DiffPoly(b.truncation()));
    DiffOperator result(a.truncation());
    // derivs[j][k] = dx^k of the order-j coefficient of b
    std::map<int, std::vector<DiffPoly>> derivs;
    for (const auto& [j, g] : b.coeffs()) derivs[j].push_back(g);
    for (const auto& [i, f] : a.coeffs()) {
        for (auto& [j, chain] : derivs) {
            while (static_cast<int>(chain.size()) <= i) chain.push_back(dx(chain.back()));
            for (int k = 0; k <= i; ++k) {
                if (chain[k].is_zero()) continue;
                result.add(i - k + j, binomial(i, k) * (f * chain[k]));
            }
        }
    }
    return result;
}

DiffOperator adjoint(const DiffOperator& a)
{
    DiffOperator result(a.truncation());
    for (const auto& [i, f] : a.coeffs()) {
        Rational sign = (i % 2 == 0) ? 1 : -1;
        DiffPoly deriv = f; // dx^{i-k} f, k descending from i
        for (int k = i; k >= 0; --k) {
            result.add(k, sign * binomial(i, k) * deriv);
            if (k > 0) deriv = dx(deriv);
        }
    }
    return result;
}

DiffOperator coeff_dx(const DiffOperator& a)
{
    return a.map_coeffs([](const DiffPoly& f) { return dx(f); });
}

std::string pretty(const DiffOperator& a, const PrettyStyle& style)
{
    struct Entry {
        int eps;
        int order;
        Monomial mono;
        Rational coeff;
    };
    std::vector<Entry> entries;
    for (const auto& [j, f] : a.coeffs())
        for (const auto& [m, c] : f.terms()) entries.push_back({m.eps_power(), j, m, c});
    MonomialOrder less;
    std::stable_sort(entries.begin(), entries.end(), [&](const Entry& x, const Entry& y) {
        if (x.eps != y.eps) return x.eps < y.eps;
        if (x.order != y.order) return x.order > y.order;
        return less(x.mono, y.mono);
    });
    std::vector<PrettyTerm> terms;
    for (const auto& e : entries) {
        PrettyTerm t{e.coeff, pretty_factors(e.mono, style)};
        if (e.order > 0) {
            std::string d = style.latex ? "\\partial_x" : "Dx";
            if (e.order > 1) d += style.latex ? "^{" + std::to_string(e.order) + "}" : "^" + std::to_string(e.order);
            t.factors.push_back(d);
        }
        terms.push_back(std::move(t));
    }
    return join_pretty(terms, style.latex);
}

// ---------------------------------------------------------------------------
// MatrixDiffOperator

MatrixDiffOperator::MatrixDiffOperator(int n, TruncationPolicy policy)
    : n_(n), policy_(policy), entries_(static_cast<std::size_t>(n * n), DiffOperator(policy))
{
}

MatrixDiffOperator MatrixDiffOperator::constant(const RationalMatrix& m, int j, TruncationPolicy policy)
{
    if (m.rows() != m.cols()) throw DimensionMismatch("constant operator needs a square matrix");
    int n = static_cast<int>(m.rows());
    MatrixDiffOperator k(n, policy);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (m(a, b) != 0) k(a, b) = DiffOperator::dx_power(j, m(a, b), policy);
    return k;
}

MatrixDiffOperator MatrixDiffOperator::identity(int n, TruncationPolicy policy)
{
    return constant(RationalMatrix::identity(n), 0, policy);
}

std::vector<DiffPoly> MatrixDiffOperator::apply(const std::vector<DiffPoly>& v) const
{
    if (static_cast<int>(v.size()) != n_) throw DimensionMismatch("operator applied to vector of wrong length");
    std::vector<DiffPoly> out(n_, DiffPoly(policy_));
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) out[a] += (*this)(a, b).apply(v[b]);
    return out;
}

MatrixDiffOperator& MatrixDiffOperator::operator+=(const MatrixDiffOperator& other)
{
    if (n_ != other.n_) throw DimensionMismatch("operator sizes differ");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

MatrixDiffOperator& MatrixDiffOperator::operator-=(const MatrixDiffOperator& other)
{
    if (n_ != other.n_) throw DimensionMismatch("operator sizes differ");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

MatrixDiffOperator& MatrixDiffOperator::operator*=(const Rational& c)
{
    for (auto& e : entries_) e *= c;
    return *this;
}

bool operator==(const MatrixDiffOperator& a, const MatrixDiffOperator& b)
{
    return a.n_ == b.n_ && a.entries_ == b.entries_;
}

bool MatrixDiffOperator::is_zero() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const DiffOperator& e) { return e.is_zero(); });
}

MatrixDiffOperator MatrixDiffOperator::map_coeffs(const std::function<DiffPoly(const DiffPoly&)>& fn) const
{
    MatrixDiffOperator r(n_, policy_);
    for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = entries_[i].map_coeffs(fn);
    return r;
}

MatrixDiffOperator MatrixDiffOperator::eps_coefficient(int k) const
{
    return map_coeffs([k](const DiffPoly& f) { return f.eps_coefficient(k); });
}

MatrixDiffOperator MatrixDiffOperator::with_truncation(TruncationPolicy policy) const
{
    MatrixDiffOperator r(n_, policy);
    for (int i = 0; i < n_ * n_; ++i) r.entries_[i] = entries_[i].with_truncation(policy);
    return r;
}

MatrixDiffOperator compose(const MatrixDiffOperator& a, const MatrixDiffOperator& b)
{
    if (a.size() != b.size()) throw DimensionMismatch("operator sizes differ");
    int n = a.size();
    MatrixDiffOperator r(n, a.truncation());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
                r(i, j) += compose(a(i, k), b(k, j));
            }
    return r;
}

MatrixDiffOperator matrix_adjoint(const MatrixDiffOperator& k)
{
    int n = k.size();
    MatrixDiffOperator r(n, k.truncation());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) r(a, b) = adjoint(k(b, a));
    return r;
}

MatrixDiffOperator coeff_dx(const MatrixDiffOperator& a)
{
    return a.map_coeffs([](const DiffPoly& f) { return dx(f); });
}

OperatorMismatch compare(const MatrixDiffOperator& a, const MatrixDiffOperator& b)
{
    OperatorMismatch out;
    if (a.size() != b.size()) throw DimensionMismatch("operator sizes differ");
    MatrixDiffOperator diff = a - b;
    int best = -1;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) {
            for (const auto& [order, f] : diff(i, j).coeffs()) {
                int e = f.min_eps_power();
                if (best < 0 || e < best || (e == best && (i < out.row || (i == out.row && j < out.col)))) {
                    best = e;
                    out.row = i;
                    out.col = j;
                }
            }
        }
    if (best < 0) return out;
    out.equal = false;
    out.eps_order = best;
    out.lhs = a(out.row, out.col).eps_coefficient(best).to_string();
    out.rhs = b(out.row, out.col).eps_coefficient(best).to_string();
    return out;
}

// ---------------------------------------------------------------------------
// Brackets and flows

LocalFunctional bracket(const LocalFunctional& f, const LocalFunctional& g, const MatrixDiffOperator& k)
{
    int n = k.size();
    std::vector<DiffPoly> df = var_gradient(f, n);
    std::vector<DiffPoly> kdg = k.apply(var_gradient(g, n));
    DiffPoly density(k.truncation());
    for (int m = 0; m < n; ++m) density += df[m] * kdg[m];
    return LocalFunctional(density);
}

std::vector<DiffPoly> hamiltonian_flow(const MatrixDiffOperator& k, const LocalFunctional& h)
{
    return k.apply(var_gradient(h, k.size()));
}

DiffOperator l_op(const DiffPoly& f, int alpha, int k)
{
    DiffOperator op(f.truncation());
    if (k < 0) return op;
    int top = f.max_order(alpha);
    for (int i = k; i <= top; ++i) {
        DiffPoly p = partial(f, {alpha, i});
        if (!p.is_zero()) op.add(i - k, binomial(i, k) * p);
    }
    return op;
}

MatrixDiffOperator omega_hat(const LocalFunctional& h, int k, const RationalMatrix& eta_inv)
{
    int n = static_cast<int>(eta_inv.rows());
    const TruncationPolicy& policy = h.truncation();
    std::vector<DiffPoly> grad = var_gradient(h, n);
    // raw(m, n) = L^k_n(delta h / delta u^m)
    std::vector<DiffOperator> raw;
    for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v) raw.push_back(l_op(grad[m], v, k));
    MatrixDiffOperator out(n, policy);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int m = 0; m < n; ++m) {
                if (eta_inv(a, m) == 0) continue;
                for (int v = 0; v < n; ++v) {
                    Rational c = eta_inv(a, m) * eta_inv(b, v);
                    if (c != 0) out(a, b) += c * raw[m * n + v];
                }
            }
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial Miura transformations

MiuraTransform::MiuraTransform(std::vector<DiffPoly> images) : images_(std::move(images))
{
    if (images_.empty()) throw DimensionMismatch("Miura transformation needs at least one field");
    for (const auto& f : images_) {
        require_same_truncation(images_.front(), f);
        if (!f.is_polynomial()) throw ValidationError("Miura image is not a differential polynomial");
        for (const auto& [m, c] : f.terms())
            if (m.combined_degree() != 0)
                throw ValidationError("Miura image term of nonzero degree: " +
                                      DiffPoly::monomial(m, c, f.truncation()).to_string());
    }
    RationalMatrix inv;
    if (!invert(linear_part(), inv)) throw NonInvertible("Jacobian of the Miura transformation is singular at the origin");
}

MiuraTransform MiuraTransform::identity(int n, TruncationPolicy policy)
{
    std::vector<DiffPoly> images;
    for (int a = 0; a < n; ++a) images.push_back(DiffPoly::variable({a, 0}, policy));
    return MiuraTransform(std::move(images));
}

RationalMatrix MiuraTransform::linear_part() const
{
    int n = size();
    RationalMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = images_[i].coefficient(Monomial::variable({j, 0}));
    return a;
}

DiffPoly pull_back(const DiffPoly& f, const MiuraTransform& m)
{
    return substitute(f, m.images());
}

MiuraTransform miura_compose(const MiuraTransform& second, const MiuraTransform& first)
{
    std::vector<DiffPoly> images;
    for (const auto& f : second.images()) images.push_back(substitute(f, first.images()));
    return MiuraTransform(std::move(images));
}

MiuraTransform miura_inverse(const MiuraTransform& m)
{
    const int n = m.size();
    const TruncationPolicy policy = m.truncation();
    RationalMatrix a = m.linear_part();
    RationalMatrix a_inv;
    if (!invert(a, a_inv)) throw NonInvertible("linear part is singular");

    std::vector<DiffPoly> rest;
    for (int i = 0; i < n; ++i) {
        DiffPoly r = m.images()[i];
        for (int j = 0; j < n; ++j)
            if (a(i, j) != 0) r.add_term(Monomial::variable({j, 0}), -a(i, j));
        rest.push_back(r);
    }

    auto solve_step = [&](const std::vector<DiffPoly>& guess) {
        std::vector<DiffPoly> rhs;
        for (int i = 0; i < n; ++i) {
            DiffPoly w = DiffPoly::variable({i, 0}, policy);
            if (!rest[i].is_zero()) w -= substitute(rest[i], guess);
            rhs.push_back(w);
        }
        std::vector<DiffPoly> next(n, DiffPoly(policy));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (a_inv(i, j) != 0) next[i] += a_inv(i, j) * rhs[j];
        return next;
    };

    // Each step fixes at least one more order in eps or in polynomial degree, and
    // both are bounded by the truncation (degree-0 terms of order eps^k carry at
    // most k derived factors).
    std::vector<DiffPoly> guess(n, DiffPoly(policy));
    const int max_steps = policy.u0_cap + 2 * policy.max_eps() + 4;
    for (int step = 0; step < max_steps; ++step) {
        std::vector<DiffPoly> next = solve_step(guess);
        if (next == guess) return MiuraTransform(std::move(next));
        guess = std::move(next);
    }
    throw NonInvertible("inverse did not stabilise within the truncation");
}

MatrixDiffOperator miura_jacobian(const std::vector<DiffPoly>& images)
{
    int n = static_cast<int>(images.size());
    MatrixDiffOperator j(n, images.front().truncation());
    for (int a = 0; a < n; ++a)
        for (int m = 0; m < n; ++m) {
            int top = images[a].max_order(m);
            for (int p = 0; p <= top; ++p) j(a, m).add(p, partial(images[a], {m, p}));
        }
    return j;
}

MatrixDiffOperator miura_pushforward(const MatrixDiffOperator& k, const MiuraTransform& m)
{
    if (k.size() != m.size()) throw DimensionMismatch("operator and transformation sizes differ");
    MatrixDiffOperator j = miura_jacobian(m.images());
    MatrixDiffOperator conj = compose(compose(j, k), matrix_adjoint(j));
    MiuraTransform inv = miura_inverse(m);
    return conj.map_coeffs([&](const DiffPoly& f) { return substitute(f, inv.images()); });
}

} // namespace drham
