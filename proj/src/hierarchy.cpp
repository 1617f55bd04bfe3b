#include "drham/hierarchy.hpp"

#include <algorithm>

#include "drham/errors.hpp"
#include "drham/poisson.hpp"
#include "drham/rational.hpp"

namespace drham {

namespace {

std::string index_label(int alpha, int d)
{
    return "(" + std::to_string(alpha + 1) + "," + std::to_string(d) + ")";
}

MatrixDiffOperator half_minus_mu(const CohFTDescriptor& d, TruncationPolicy policy)
{
    RationalMatrix m(d.n, d.n);
    for (int a = 0; a < d.n; ++a) m(a, a) = Rational(1, 2) - d.hom.mu(a);
    return MatrixDiffOperator::constant(m, 0, policy);
}

MatrixDiffOperator dx_matrix(int n, TruncationPolicy policy)
{
    return MatrixDiffOperator::constant(RationalMatrix::identity(n), 1, policy);
}

/// First differing component of two tuples at the lowest eps order, after projection
/// to the reported policy; fills v on mismatch.
void compare_tuples(std::vector<DiffPoly> lhs, std::vector<DiffPoly> rhs, TruncationPolicy policy, Verdict& v)
{
    int best_eps = -1;
    std::size_t best = 0;
    for (auto& f : lhs) f = f.with_truncation(policy);
    for (auto& f : rhs) f = f.with_truncation(policy);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        DiffPoly diff = lhs[i] - rhs[i];
        if (diff.is_zero()) continue;
        int e = diff.min_eps_power();
        if (best_eps < 0 || e < best_eps) {
            best_eps = e;
            best = i;
        }
    }
    if (best_eps < 0) return;
    v.ok = false;
    v.epsilon_order = best_eps;
    v.entry = "component " + std::to_string(best + 1);
    v.witness = "lhs = " + lhs[best].eps_coefficient(best_eps).to_string() +
                ", rhs = " + rhs[best].eps_coefficient(best_eps).to_string();
}

void fill_from(const MatrixDiffOperator& a, const MatrixDiffOperator& b, TruncationPolicy policy, Verdict& v)
{
    OperatorMismatch m = compare(a.with_truncation(policy), b.with_truncation(policy));
    if (m.equal) return;
    v.ok = false;
    v.epsilon_order = m.eps_order;
    v.entry = "(" + std::to_string(m.row + 1) + "," + std::to_string(m.col + 1) + ")";
    v.witness = "lhs = " + m.lhs + ", rhs = " + m.rhs;
}

using Functionals = std::map<std::pair<int, int>, LocalFunctional>;

std::vector<Verdict> recursion_verdicts(const CohFTDescriptor& desc, TruncationPolicy policy,
                                        const MatrixDiffOperator& k, const MatrixDiffOperator& k1,
                                        const Functionals& h, int d_max, const std::string& prefix)
{
    int n = desc.n;
    std::map<std::pair<int, int>, std::vector<DiffPoly>> flows, grads;
    auto grad = [&](int a, int d) -> const std::vector<DiffPoly>& {
        auto it = grads.find({a, d});
        if (it == grads.end()) it = grads.emplace(std::pair{a, d}, var_gradient(h.at({a, d}), n)).first;
        return it->second;
    };
    auto flow = [&](int a, int d) -> const std::vector<DiffPoly>& {
        auto it = flows.find({a, d});
        if (it == flows.end()) it = flows.emplace(std::pair{a, d}, k1.apply(grad(a, d))).first;
        return it->second;
    };
    std::vector<Verdict> out;
    for (int a = 0; a < n; ++a)
        for (int d = -1; d <= d_max; ++d) {
            Verdict v;
            v.check = "recursion";
            v.subject = prefix + "d=" + std::to_string(d) + ", alpha=" + std::to_string(a + 1);
            if (!h.contains({a, d + 1})) throw TableGap("recursion needs g" + index_label(a, d + 1));
            std::vector<DiffPoly> lhs = k.apply(grad(a, d));
            Rational factor = Rational(d) + Rational(3, 2) + desc.hom.mu(a);
            std::vector<DiffPoly> rhs;
            for (const auto& f : flow(a, d + 1)) rhs.push_back(factor * f);
            for (int b = 0; b < n; ++b) {
                const Rational& c = desc.a_upper(b, a);
                if (c == 0) continue;
                const auto& fb = flow(b, d);
                for (int i = 0; i < n; ++i) rhs[i] += c * fb[i];
            }
            compare_tuples(lhs, rhs, policy, v);
            out.push_back(v);
        }
    return out;
}

} // namespace

int default_slack(TruncationPolicy policy)
{
    return 2 * policy.max_eps() + 6;
}

HierarchyBundle build_bundle(const CohFTDescriptor& d, TruncationPolicy requested, int d_max, int slack)
{
    HierarchyBundle bundle;
    bundle.descriptor = d;
    bundle.policy = requested;
    bundle.work = {requested.genus_cap, requested.u0_cap + (slack < 0 ? default_slack(requested) : slack)};
    bundle.d_max = d_max;
    TruncationPolicy policy = bundle.work;
    for (int a = 0; a < d.n; ++a)
        for (int deg = -1; deg <= std::max(d_max + 1, 1); ++deg) bundle.g.emplace(std::pair{a, deg}, build_g(d, a, deg, policy));

    DiffPoly source(policy);
    for (int a = 0; a < d.n; ++a)
        if (d.unit[a] != 0) source += d.unit[a] * bundle.hamiltonian(a, 1).density();
    bundle.gbar = solve_d_minus_2(LocalFunctional(source, "A^a g_{a,1}"));

    bundle.k1 = MatrixDiffOperator::constant(d.eta_inv, 1, policy);
    MatrixDiffOperator w0 = omega_hat(bundle.gbar, 0, d.eta_inv);
    MatrixDiffOperator w1 = omega_hat(bundle.gbar, 1, d.eta_inv);
    MatrixDiffOperator dxm = dx_matrix(d.n, policy);
    const HomogeneityData& hom = d.hom;
    MatrixDiffOperator e_w0 = w0.map_coeffs([&](const DiffPoly& f) { return e_hat(f, hom); });
    bundle.kdr = compose(e_w0, dxm) + compose(coeff_dx(w0), half_minus_mu(d, policy)) +
                 compose(compose(dxm, w1), dxm);
    return bundle;
}

MatrixDiffOperator build_kdr_alt(const HierarchyBundle& bundle)
{
    const CohFTDescriptor& d = bundle.descriptor;
    TruncationPolicy policy = bundle.work;
    MatrixDiffOperator w0 = omega_hat(bundle.gbar, 0, d.eta_inv);
    MatrixDiffOperator w1 = omega_hat(bundle.gbar, 1, d.eta_inv);
    MatrixDiffOperator dxm = dx_matrix(d.n, policy);
    MatrixDiffOperator h = half_minus_mu(d, policy);
    MatrixDiffOperator a_term = MatrixDiffOperator::constant(d.eta_inv * d.a_lower * d.eta_inv, 1, policy);
    return compose(compose(dxm, w0), h) + compose(compose(h, w0), dxm) + a_term + compose(compose(dxm, w1), dxm);
}

PrincipalBundle build_principal(const HierarchyBundle& bundle)
{
    const CohFTDescriptor& d = bundle.descriptor;
    TruncationPolicy policy = bundle.work;
    int d_max = bundle.d_max;
    PrincipalBundle p;
    int n = d.n;
    for (int a = 0; a < n; ++a)
        for (int deg = -1; deg <= d_max + 1; ++deg)
            p.h0.emplace(std::pair{a, deg},
                         LocalFunctional(genus0_density(d, a, deg, policy), "h0" + index_label(a, deg)));

    DiffPoly f0 = d.f0(policy);
    std::vector<DiffPoly> hess(n * n, DiffPoly(policy));
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) hess[m * n + k] = partial(partial(f0, {m, 0}), {k, 0});
    p.b.assign(n * n, DiffPoly(policy));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int m = 0; m < n; ++m)
                for (int k = 0; k < n; ++k) {
                    Rational c = d.eta_inv(a, m) * d.eta_inv(b, k);
                    if (c != 0) p.b[a * n + b] += c * hess[m * n + k];
                }
    p.g.assign(n * n, DiffPoly(policy));
    for (int i = 0; i < n * n; ++i)
        for (int v = 0; v < n; ++v) {
            DiffPoly weight = Rational(1 - d.hom.q[v]) * DiffPoly::variable({v, 0}, policy) +
                              DiffPoly::constant(d.hom.r[v], policy);
            p.g[i] += weight * partial(p.b[i], {v, 0});
        }
    p.k2 = MatrixDiffOperator(n, policy);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            DiffOperator entry = compose(DiffOperator::multiplication(p.g[a * n + b]), DiffOperator::dx_power(1, 1, policy));
            entry += DiffOperator::multiplication(Rational(Rational(1, 2) - d.hom.mu(b)) * dx(p.b[a * n + b]));
            p.k2(a, b) = entry;
        }
    return p;
}

std::vector<Verdict> check_recursion(const HierarchyBundle& bundle, int d_max)
{
    return recursion_verdicts(bundle.descriptor, bundle.policy, bundle.kdr, bundle.k1, bundle.g, d_max, "");
}

std::vector<Verdict> check_principal_recursion(const HierarchyBundle& bundle, const PrincipalBundle& principal,
                                               int d_max)
{
    return recursion_verdicts(bundle.descriptor, bundle.policy, principal.k2, bundle.k1, principal.h0, d_max,
                              "principal ");
}

Verdict check_dispersionless(const HierarchyBundle& bundle, const PrincipalBundle& principal)
{
    Verdict v;
    v.check = "dispersionless";
    v.subject = "K^DR at eps=0 vs Dubrovin bracket";
    fill_from(bundle.kdr.at_eps_zero(), principal.k2, bundle.policy, v);
    return v;
}

Verdict check_alternative(const HierarchyBundle& bundle)
{
    Verdict v;
    v.check = "kdr_alt";
    v.subject = "K^DR vs alternative form";
    fill_from(bundle.kdr, build_kdr_alt(bundle), bundle.policy, v);
    return v;
}

Verdict check_skew(const HierarchyBundle& bundle)
{
    Verdict v;
    v.check = "skew";
    v.subject = "K^DR + K^DR^dagger";
    fill_from(bundle.kdr, Rational(-1) * matrix_adjoint(bundle.kdr), bundle.policy, v);
    return v;
}

std::vector<DiffPoly> kdr_identity_p(const HierarchyBundle& bundle)
{
    const CohFTDescriptor& d = bundle.descriptor;
    std::vector<DiffPoly> p;
    for (int a = 0; a < d.n; ++a) {
        DiffPoly upper(bundle.work);
        for (int k = 0; k < d.n; ++k)
            if (d.eta_inv(a, k) != 0) upper += d.eta_inv(a, k) * bundle.hamiltonian(k, 0).density();
        p.push_back(dx(upper - upper.at_eps_zero()));
    }
    return p;
}

Verdict verify_kdr_identity(const HierarchyBundle& bundle, const PrincipalBundle& principal)
{
    return verify_kdr_identity(bundle, principal, kdr_identity_p(bundle));
}

Verdict verify_kdr_identity(const HierarchyBundle& bundle, const PrincipalBundle& principal,
                            const std::vector<DiffPoly>& p)
{
    Verdict v;
    v.check = "kdr_identity";
    v.subject = "pol part of transported Dubrovin bracket vs K^DR";
    fill_from(lemma_s2_pushforward(principal.k2, p), bundle.kdr, bundle.policy, v);
    return v;
}

std::vector<Verdict> check_commuting(const HierarchyBundle& bundle, int d_max)
{
    int n = bundle.descriptor.n;
    std::vector<std::pair<int, int>> indices;
    for (int a = 0; a < n; ++a)
        for (int d = -1; d <= d_max; ++d) indices.emplace_back(a, d);
    std::vector<Verdict> out;
    for (std::size_t i = 0; i < indices.size(); ++i)
        for (std::size_t j = i + 1; j < indices.size(); ++j) {
            auto [a, p] = indices[i];
            auto [b, q] = indices[j];
            Verdict v;
            v.check = "commuting";
            v.subject = "g" + index_label(a, p) + " vs g" + index_label(b, q);
            LocalFunctional br = bracket(bundle.hamiltonian(a, p), bundle.hamiltonian(b, q), bundle.k1);
            std::vector<DiffPoly> grad = var_gradient(br, n);
            compare_tuples(grad, std::vector<DiffPoly>(n, DiffPoly(bundle.work)), bundle.policy, v);
            if (!v.ok) v.entry = "delta/delta u, " + v.entry;
            out.push_back(v);
        }
    return out;
}

std::vector<Verdict> check_omega_adjoint(const HierarchyBundle& bundle, int k_max)
{
    std::vector<Verdict> out;
    for (int k = 0; k <= k_max; ++k) {
        Verdict v;
        v.check = "omega_adjoint";
        v.subject = "k=" + std::to_string(k);
        MatrixDiffOperator w = omega_hat(bundle.gbar, k, bundle.descriptor.eta_inv);
        MatrixDiffOperator signed_w = k % 2 == 0 ? w : Rational(-1) * w;
        fill_from(matrix_adjoint(w), signed_w, bundle.policy, v);
        out.push_back(v);
    }
    return out;
}

std::vector<Verdict> run_checks(const HierarchyBundle& bundle, const PrincipalBundle& principal,
                                const std::set<std::string>& checks)
{
    std::vector<Verdict> out;
    auto append = [&](std::vector<Verdict> vs) { out.insert(out.end(), vs.begin(), vs.end()); };
    auto want = [&](const char* name) { return checks.contains("all") || checks.contains(name); };
    if (want("commuting")) append(check_commuting(bundle, bundle.d_max));
    if (want("compat")) out.push_back(is_compatible(bundle.k1, bundle.kdr, "eta^-1 Dx and K^DR", bundle.policy));
    if (want("dispersionless")) out.push_back(check_dispersionless(bundle, principal));
    if (want("kdr_alt")) out.push_back(check_alternative(bundle));
    if (want("kdr_identity")) out.push_back(verify_kdr_identity(bundle, principal));
    if (want("poisson")) out.push_back(is_poisson(bundle.kdr, "K^DR", bundle.policy));
    if (want("recursion")) {
        append(check_recursion(bundle, bundle.d_max));
        append(check_principal_recursion(bundle, principal, bundle.d_max));
    }
    if (want("skew")) out.push_back(check_skew(bundle));
    std::stable_sort(out.begin(), out.end(), [](const Verdict& a, const Verdict& b) { return a.check < b.check; });
    for (auto& v : out) {
        v.descriptor = bundle.descriptor.name;
        if (v.ok) v.epsilon_order = v.check == "dispersionless" ? 0 : bundle.policy.max_eps();
    }
    return out;
}

} // namespace drham
