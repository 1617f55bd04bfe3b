#include "drham/poisson.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "drham/errors.hpp"

namespace drham {

namespace {

/// Product of two sorted words with its sign, or nullopt when a variable repeats.
std::optional<std::pair<OddWord, int>> merge(const OddWord& a, const OddWord& b)
{
    OddWord out;
    out.reserve(a.size() + b.size());
    int inversions = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            inversions += static_cast<int>(a.size() - i);
            out.push_back(b[j++]);
        } else {
            return std::nullopt;
        }
    }
    return std::make_pair(std::move(out), inversions % 2 == 0 ? 1 : -1);
}

std::string entry_label(int row, int col)
{
    return "(" + std::to_string(row + 1) + "," + std::to_string(col + 1) + ")";
}

} // namespace

SuperDiffPoly SuperDiffPoly::even(const DiffPoly& f)
{
    SuperDiffPoly s(f.truncation());
    s.add({}, f);
    return s;
}

SuperDiffPoly SuperDiffPoly::odd(OddVar v, TruncationPolicy policy)
{
    SuperDiffPoly s(policy);
    s.add({v}, DiffPoly::constant(1, policy));
    return s;
}

DiffPoly SuperDiffPoly::coefficient(const OddWord& w) const
{
    auto it = parts_.find(w);
    return it == parts_.end() ? DiffPoly(policy_) : it->second;
}

void SuperDiffPoly::add(const OddWord& w, const DiffPoly& coeff)
{
    require_same_truncation(DiffPoly(policy_), coeff);
    if (coeff.is_zero()) return;
    auto [it, inserted] = parts_.try_emplace(w, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) parts_.erase(it);
    }
}

SuperDiffPoly& SuperDiffPoly::operator+=(const SuperDiffPoly& other)
{
    for (const auto& [w, c] : other.parts_) add(w, c);
    return *this;
}

SuperDiffPoly& SuperDiffPoly::operator-=(const SuperDiffPoly& other)
{
    for (const auto& [w, c] : other.parts_) add(w, -c);
    return *this;
}

SuperDiffPoly& SuperDiffPoly::operator*=(const Rational& c)
{
    if (c == 0) {
        parts_.clear();
        return *this;
    }
    for (auto& [w, f] : parts_) f *= c;
    return *this;
}

SuperDiffPoly operator*(const SuperDiffPoly& a, const SuperDiffPoly& b)
{
    require_same_truncation(DiffPoly(a.policy_), DiffPoly(b.policy_));
    SuperDiffPoly r(a.policy_);
    for (const auto& [wa, ca] : a.parts_)
        for (const auto& [wb, cb] : b.parts_) {
            auto m = merge(wa, wb);
            if (!m) continue;
            DiffPoly c = ca * cb;
            if (m->second < 0) c *= Rational(-1);
            r.add(m->first, c);
        }
    return r;
}

SuperDiffPoly SuperDiffPoly::with_truncation(TruncationPolicy policy) const
{
    SuperDiffPoly r(policy);
    for (const auto& [w, c] : parts_) r.add(w, c.with_truncation(policy));
    return r;
}

SuperDiffPoly SuperDiffPoly::eps_coefficient(int k) const
{
    SuperDiffPoly r(policy_);
    for (const auto& [w, c] : parts_) r.add(w, c.eps_coefficient(k));
    return r;
}

int SuperDiffPoly::min_eps_power() const
{
    int best = -1;
    for (const auto& [w, c] : parts_) {
        int e = c.min_eps_power();
        if (best < 0 || e < best) best = e;
    }
    return best;
}

int SuperDiffPoly::max_odd_order(int alpha) const
{
    int best = -1;
    for (const auto& [w, c] : parts_)
        for (const auto& v : w)
            if (v.alpha == alpha) best = std::max(best, v.d);
    return best;
}

std::string SuperDiffPoly::to_string() const
{
    if (parts_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [w, c] : parts_) {
        if (!first) out << " + ";
        first = false;
        out << "(" << c.to_string() << ")";
        for (const auto& v : w) out << " * th[" << v.alpha + 1 << "," << v.d << "]";
    }
    return out.str();
}

SuperDiffPoly dx(const SuperDiffPoly& f)
{
    SuperDiffPoly r(f.truncation());
    for (const auto& [w, c] : f.parts()) {
        r.add(w, dx(c));
        for (std::size_t i = 0; i < w.size(); ++i) {
            OddVar raised{w[i].alpha, w[i].d + 1};
            if (std::find(w.begin(), w.end(), raised) != w.end()) continue;
            OddWord rest = w;
            rest.erase(rest.begin() + static_cast<long>(i));
            // the raised variable sits at position i; moving it into sorted place
            // passes every later element smaller than it
            auto pos = std::lower_bound(rest.begin(), rest.end(), raised);
            int passed = static_cast<int>(pos - rest.begin()) - static_cast<int>(i);
            rest.insert(pos, raised);
            r.add(rest, passed % 2 == 0 ? c : -c);
        }
    }
    return r;
}

SuperDiffPoly partial(const SuperDiffPoly& f, VarIndex v)
{
    SuperDiffPoly r(f.truncation());
    for (const auto& [w, c] : f.parts()) r.add(w, partial(c, v));
    return r;
}

SuperDiffPoly partial(const SuperDiffPoly& f, OddVar v)
{
    SuperDiffPoly r(f.truncation());
    for (const auto& [w, c] : f.parts()) {
        auto it = std::find(w.begin(), w.end(), v);
        if (it == w.end()) continue;
        long pos = it - w.begin();
        OddWord rest = w;
        rest.erase(rest.begin() + pos);
        r.add(rest, pos % 2 == 0 ? c : -c);
    }
    return r;
}

SuperDiffPoly odd_var_derivative(const SuperDiffPoly& f, int alpha)
{
    SuperDiffPoly r(f.truncation());
    for (int s = f.max_odd_order(alpha); s >= 0; --s) {
        r = partial(f, OddVar{alpha, s}) - dx(r);
    }
    return r;
}

SuperDiffPoly prolong(const std::vector<SuperDiffPoly>& q, const SuperDiffPoly& f)
{
    SuperDiffPoly r(f.truncation());
    for (int a = 0; a < static_cast<int>(q.size()); ++a) {
        int top = -1;
        for (const auto& [w, c] : f.parts()) top = std::max(top, c.max_order(a));
        SuperDiffPoly qs = q[a];
        for (int s = 0; s <= top; ++s) {
            SuperDiffPoly df = partial(f, VarIndex{a, s});
            if (!df.is_zero()) r += qs * df;
            if (s < top) qs = dx(qs);
        }
    }
    return r;
}

std::vector<SuperDiffPoly> apply_to_theta(const MatrixDiffOperator& k)
{
    int n = k.size();
    std::vector<SuperDiffPoly> out(n, SuperDiffPoly(k.truncation()));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (const auto& [j, c] : k(a, b).coeffs()) out[a].add({OddVar{b, j}}, c);
    return out;
}

Bivector bivector_of(const MatrixDiffOperator& k)
{
    OperatorMismatch skew = compare(k, Rational(-1) * matrix_adjoint(k));
    if (!skew.equal)
        throw NotSkew("K + K^dagger is nonzero at entry " + entry_label(skew.row, skew.col) +
                      ", eps order " + std::to_string(skew.eps_order));
    TruncationPolicy policy = k.truncation();
    SuperDiffPoly density(policy);
    std::vector<SuperDiffPoly> ktheta = apply_to_theta(k);
    for (int a = 0; a < k.size(); ++a) density += SuperDiffPoly::odd({a, 0}, policy) * ktheta[a];
    density *= Rational(1, 2);
    return {density, k};
}

MatrixDiffOperator operator_of(const Bivector& p, int n)
{
    MatrixDiffOperator k(n, p.density.truncation());
    for (int a = 0; a < n; ++a) {
        SuperDiffPoly grad = odd_var_derivative(p.density, a);
        for (const auto& [w, c] : grad.parts()) {
            if (w.size() != 1) throw std::logic_error("bivector density is not quadratic in theta");
            k(a, w.front().alpha).add(w.front().d, c);
        }
    }
    return k;
}

SuperDiffPoly schouten(const Bivector& p, const Bivector& q)
{
    SuperDiffPoly r = prolong(apply_to_theta(p.op), q.density);
    if (&p == &q) return r;
    r += prolong(apply_to_theta(q.op), p.density);
    return Rational(1, 2) * r;
}

TrivectorWitness functional_witness(const SuperDiffPoly& density, int n, std::optional<TruncationPolicy> report)
{
    TrivectorWitness out;
    for (int a = 0; a < n; ++a) {
        SuperDiffPoly g = odd_var_derivative(density, a);
        if (report) g = g.with_truncation(*report);
        if (g.is_zero()) continue;
        int e = g.min_eps_power();
        if (out.zero || e < out.epsilon_order) {
            out.zero = false;
            out.epsilon_order = e;
            out.alpha = a;
            out.expression = g.eps_coefficient(e).to_string();
        }
    }
    return out;
}

namespace {

Verdict from_witness(Verdict v, const TrivectorWitness& w)
{
    v.ok = w.zero;
    if (!w.zero) {
        v.epsilon_order = w.epsilon_order;
        v.entry = "delta/delta theta_" + std::to_string(w.alpha + 1);
        v.witness = w.expression;
    }
    return v;
}

bool skew_or_fail(const MatrixDiffOperator& k, const std::string& name, Verdict& v,
                  std::optional<TruncationPolicy> report)
{
    MatrixDiffOperator minus_adjoint = Rational(-1) * matrix_adjoint(k);
    OperatorMismatch skew = report ? compare(k.with_truncation(*report), minus_adjoint.with_truncation(*report))
                                   : compare(k, minus_adjoint);
    if (skew.equal) return true;
    v.ok = false;
    v.epsilon_order = skew.eps_order;
    v.entry = name + entry_label(skew.row, skew.col);
    v.witness = "not skew: K = " + skew.lhs + ", -K^dagger = " + skew.rhs;
    return false;
}

/// (K - K^dagger)/2 is skew on the nose even where a wide computation left junk above
/// the reported cap.
Bivector skew_bivector(const MatrixDiffOperator& k, std::optional<TruncationPolicy> report)
{
    if (!report) return bivector_of(k);
    return bivector_of(Rational(1, 2) * (k - matrix_adjoint(k)));
}

} // namespace

Verdict is_poisson(const MatrixDiffOperator& k, const std::string& subject, std::optional<TruncationPolicy> report)
{
    Verdict v;
    v.check = "poisson";
    v.subject = subject;
    if (!skew_or_fail(k, "", v, report)) return v;
    Bivector p = skew_bivector(k, report);
    return from_witness(v, functional_witness(schouten(p, p), k.size(), report));
}

Verdict is_compatible(const MatrixDiffOperator& k1, const MatrixDiffOperator& k2, const std::string& subject,
                      std::optional<TruncationPolicy> report)
{
    Verdict v;
    v.check = "compat";
    v.subject = subject;
    if (k1.size() != k2.size()) throw DimensionMismatch("pencil members have different sizes");
    if (!skew_or_fail(k1, "K1", v, report) || !skew_or_fail(k2, "K2", v, report)) return v;
    Bivector p = skew_bivector(k1, report), q = skew_bivector(k2, report);
    return from_witness(v, functional_witness(schouten(p, q), k1.size(), report));
}

} // namespace drham
