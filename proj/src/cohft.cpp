#include "drham/cohft.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "drham/errors.hpp"
#include "json.hpp"

namespace drham {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "drham-cohft/1";

/// Wide enough that no potential of a sane descriptor is clipped while validating.
TruncationPolicy validation_policy(const std::string& f0_text)
{
    int degree = 3;
    DiffPoly probe = DiffPoly::parse(f0_text, {0, 1 << 12});
    for (const auto& [m, c] : probe.terms()) degree = std::max(degree, m.total_degree());
    return {0, degree + 2};
}

std::string where(const std::string& origin, const std::string& field)
{
    return origin + ": " + field;
}

Rational read_rational(const json& j, const std::string& origin, const std::string& field)
{
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw ParseError(where(origin, field) + " must be a fraction string");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(where(origin, field) + ": " + e.what());
    }
}

std::vector<Rational> read_vector(const json& j, std::size_t n, const std::string& origin, const std::string& field)
{
    if (!j.is_array() || j.size() != n)
        throw ParseError(where(origin, field) + " must be an array of length " + std::to_string(n));
    std::vector<Rational> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(read_rational(j[i], origin, field + "[" + std::to_string(i) + "]"));
    return out;
}

RationalMatrix read_matrix(const json& j, std::size_t n, const std::string& origin, const std::string& field)
{
    if (!j.is_array() || j.size() != n)
        throw ParseError(where(origin, field) + " must be an " + std::to_string(n) + "x" + std::to_string(n) +
                         " array");
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = read_vector(j[i], n, origin, field + "[" + std::to_string(i) + "]");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = row[k];
    }
    return m;
}

const json& require(const json& j, const char* key, const std::string& origin)
{
    if (!j.contains(key)) throw ParseError(where(origin, key) + " is missing");
    return j.at(key);
}

int read_int(const json& j, const std::string& origin, const std::string& field)
{
    if (!j.is_number_integer()) throw ParseError(where(origin, field) + " must be an integer");
    return j.get<int>();
}

json rational_json(const Rational& q)
{
    return to_string(q);
}

/// Monomial prod u^{alpha_i}_0 for the underived points of a key.
Monomial point_monomial(const std::vector<std::pair<int, int>>& points)
{
    Monomial m;
    for (const auto& [a, b] : points) m = m * Monomial::variable({a, b});
    return m;
}

/// prod over distinct points of multiplicity!
Rational multiplicity_factorial(const std::vector<std::pair<int, int>>& points)
{
    Rational f = 1;
    std::size_t i = 0;
    while (i < points.size()) {
        std::size_t j = i;
        while (j < points.size() && points[j] == points[i]) ++j;
        for (std::size_t k = 2; k <= j - i; ++k) f *= static_cast<long>(k);
        i = j;
    }
    return f;
}

} // namespace

DiffPoly CohFTDescriptor::f0(TruncationPolicy policy) const
{
    return DiffPoly::parse(f0_text, policy);
}

// ---------------------------------------------------------------------------
// Loading and serialization

CohFTDescriptor load_descriptor(std::string_view text, const std::string& origin)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": byte " + std::to_string(e.byte) + ": malformed JSON");
    }
    if (!j.is_object()) throw ParseError(origin + ": top level must be an object");
    if (j.value("format", std::string()) != kFormat)
        throw ParseError(where(origin, "format") + " must be \"" + kFormat + "\"");

    CohFTDescriptor d;
    d.name = j.value("name", origin);
    d.n = read_int(require(j, "n_fields", origin), origin, "n_fields");
    if (d.n < 1) throw ValidationError(where(origin, "n_fields") + " must be positive");
    std::size_t n = static_cast<std::size_t>(d.n);
    d.eta = read_matrix(require(j, "eta", origin), n, origin, "eta");
    d.unit = read_vector(require(j, "unit", origin), n, origin, "unit");
    const json& hom = require(j, "homogeneity", origin);
    d.hom.q = read_vector(require(hom, "q", origin), n, origin, "homogeneity.q");
    d.hom.delta = read_rational(require(hom, "delta", origin), origin, "homogeneity.delta");
    d.hom.r = read_vector(require(hom, "r", origin), n, origin, "homogeneity.r");
    const json& f0 = require(j, "f0", origin);
    if (!f0.is_string()) throw ParseError(where(origin, "f0") + " must be a polynomial string");
    d.f0_text = f0.get<std::string>();
    try {
        DiffPoly::parse(d.f0_text, {0, 1 << 12});
    } catch (const ParseError& e) {
        throw ParseError(where(origin, "f0") + ": " + e.what());
    }
    d.require_unit_first = j.value("require_unit_first", true);

    if (j.contains("metadata")) {
        const json& meta = j.at("metadata");
        if (!meta.is_object()) throw ParseError(where(origin, "metadata") + " must be an object");
        for (const auto& [key, value] : meta.items()) {
            if (!value.is_string()) throw ParseError(where(origin, "metadata." + key) + " must be a string");
            d.metadata[key] = value.get<std::string>();
        }
    }

    if (j.contains("tables")) {
        const json& t = j.at("tables");
        d.tables.genus_max = read_int(require(t, "genus_max", origin), origin, "tables.genus_max");
        d.tables.d_max = read_int(require(t, "d_max", origin), origin, "tables.d_max");
        const json& entries = require(t, "entries", origin);
        if (!entries.is_array()) throw ParseError(where(origin, "tables.entries") + " must be an array");
        for (std::size_t i = 0; i < entries.size(); ++i) {
            std::string field = "tables.entries[" + std::to_string(i) + "]";
            const json& e = entries[i];
            TableKey key;
            key.genus = read_int(require(e, "g", origin), origin, field + ".g");
            key.alpha = read_int(require(e, "alpha", origin), origin, field + ".alpha") - 1;
            key.d = read_int(require(e, "d", origin), origin, field + ".d");
            const json& pts = require(e, "points", origin);
            if (!pts.is_array()) throw ParseError(where(origin, field + ".points") + " must be an array");
            for (const auto& p : pts) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
                    throw ParseError(where(origin, field + ".points") + " must hold [alpha, b] pairs");
                key.points.emplace_back(p[0].get<int>() - 1, p[1].get<int>());
            }
            std::sort(key.points.begin(), key.points.end());
            Rational value = read_rational(require(e, "value", origin), origin, field + ".value");
            auto [it, inserted] = d.tables.entries.try_emplace(key, value);
            if (!inserted && it->second != value)
                throw ValidationError(where(origin, field) + ": table is not symmetric under permuting points");
        }
    }

    std::optional<RationalMatrix> a_given;
    if (j.contains("a_matrix")) a_given = read_matrix(j.at("a_matrix"), n, origin, "a_matrix");

    try {
        validate(d);
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + std::string(e.what()).substr(std::string("ValidationError: ").size()));
    }
    if (a_given && !(*a_given == d.a_lower))
        throw ValidationError(origin + ": a_matrix disagrees with c_{0,3}(e_a, e_b, r)");
    return d;
}

CohFTDescriptor load_descriptor_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open descriptor file");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_descriptor(buf.str(), path);
}

CohFTDescriptor resolve_descriptor(const std::string& spec)
{
    for (const auto& name : builtin_names())
        if (name == spec) return builtin_descriptor(spec);
    namespace fs = std::filesystem;
    if (fs::is_regular_file(spec)) return load_descriptor_file(spec);
    if (const char* env = std::getenv("DRHAM_COHFT_PATH")) {
        std::stringstream dirs(env);
        std::string dir;
        while (std::getline(dirs, dir, ':')) {
            if (dir.empty()) continue;
            for (const std::string& candidate : {spec, spec + ".json"}) {
                fs::path p = fs::path(dir) / candidate;
                if (fs::is_regular_file(p)) return load_descriptor_file(p.string());
            }
        }
    }
    throw ParseError("no builtin or descriptor file named '" + spec + "'");
}

std::string to_json(const CohFTDescriptor& d)
{
    auto vec = [](const std::vector<Rational>& v) {
        json a = json::array();
        for (const auto& x : v) a.push_back(rational_json(x));
        return a;
    };
    auto mat = [](const RationalMatrix& m) {
        json a = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(rational_json(m(i, k)));
            a.push_back(row);
        }
        return a;
    };
    json j;
    j["format"] = kFormat;
    j["name"] = d.name;
    j["n_fields"] = d.n;
    j["eta"] = mat(d.eta);
    j["unit"] = vec(d.unit);
    j["homogeneity"] = {{"q", vec(d.hom.q)}, {"delta", rational_json(d.hom.delta)}, {"r", vec(d.hom.r)}};
    j["f0"] = d.f0_text;
    j["a_matrix"] = mat(d.a_lower);
    j["require_unit_first"] = d.require_unit_first;
    json entries = json::array();
    for (const auto& [key, value] : d.tables.entries) {
        json pts = json::array();
        for (const auto& [a, b] : key.points) pts.push_back({a + 1, b});
        entries.push_back({{"g", key.genus}, {"alpha", key.alpha + 1}, {"d", key.d}, {"points", pts},
                           {"value", rational_json(value)}});
    }
    j["tables"] = {{"genus_max", d.tables.genus_max}, {"d_max", d.tables.d_max}, {"entries", entries}};
    json meta = json::object();
    for (const auto& [k, v] : d.metadata) meta[k] = v;
    j["metadata"] = meta;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Validation

void validate(CohFTDescriptor& d)
{
    std::size_t n = static_cast<std::size_t>(d.n);
    if (!d.eta.is_symmetric()) throw ValidationError("eta is not symmetric");
    if (!invert(d.eta, d.eta_inv)) throw ValidationError("eta is not invertible");

    for (int a = 0; a < d.n; ++a)
        for (int b = 0; b < d.n; ++b)
            if (d.eta(a, b) != 0 && d.hom.mu(a) + d.hom.mu(b) != 0)
                throw ValidationError("mu eta + eta mu != 0 at entry (" + std::to_string(a + 1) + "," +
                                      std::to_string(b + 1) + ")");

    if (d.require_unit_first) {
        for (int a = 0; a < d.n; ++a)
            if (d.unit[a] != (a == 0 ? 1 : 0)) throw ValidationError("unit is not e_1 but require_unit_first is set");
        if (d.hom.q[0] != 0) throw ValidationError("q_1 must vanish when e = e_1");
    }

    TruncationPolicy policy = validation_policy(d.f0_text);
    DiffPoly f0 = d.f0(policy);
    for (const auto& [m, c] : f0.terms()) {
        if (m.eps_power() != 0) throw ValidationError("f0 depends on eps");
        for (const auto& [v, e] : m.factors()) {
            if (v.d != 0) throw ValidationError("f0 depends on derived variables");
            if (v.alpha >= d.n) throw ValidationError("f0 refers to a field beyond n_fields");
        }
    }

    // unit axiom: A^a c_{abc}(u) = eta_{bc} identically
    for (int b = 0; b < d.n; ++b)
        for (int c = 0; c < d.n; ++c) {
            DiffPoly contraction(policy);
            DiffPoly fbc = partial(partial(f0, {b, 0}), {c, 0});
            for (int a = 0; a < d.n; ++a)
                if (d.unit[a] != 0) contraction += d.unit[a] * partial(fbc, {a, 0});
            if (!(contraction == DiffPoly::constant(d.eta(b, c), policy)))
                throw ValidationError("third derivatives of f0 contracted with the unit do not give eta at (" +
                                      std::to_string(b + 1) + "," + std::to_string(c + 1) + ")");
        }

    // quasi-homogeneity up to quadratic terms: E F0 = (3 - delta) F0
    DiffPoly euler(policy);
    for (int a = 0; a < d.n; ++a) {
        DiffPoly fa = partial(f0, {a, 0});
        euler += Rational(1 - d.hom.q[a]) * DiffPoly::variable({a, 0}, policy) * fa;
        euler += d.hom.r[a] * fa;
    }
    euler -= Rational(3 - d.hom.delta) * f0;
    for (const auto& [m, c] : euler.terms())
        if (m.total_degree() > 2) throw ValidationError("f0 is not quasi-homogeneous: E F0 - (3 - delta) F0 has degree " +
                                                        std::to_string(m.total_degree()) + " terms");

    d.a_lower = RationalMatrix(n, n);
    for (int a = 0; a < d.n; ++a)
        for (int b = 0; b < d.n; ++b) {
            DiffPoly fab = partial(partial(f0, {a, 0}), {b, 0});
            Rational s = 0;
            for (int g = 0; g < d.n; ++g)
                if (d.hom.r[g] != 0) s += d.hom.r[g] * partial(fab, {g, 0}).coefficient(Monomial{});
            d.a_lower(a, b) = s;
        }
    d.a_upper = d.eta_inv * d.a_lower;

    const IntersectionTable& t = d.tables;
    if (t.genus_max < 0 || t.d_max < 0) throw ValidationError("table coverage must be nonnegative");
    for (const auto& [key, value] : t.entries) {
        std::string label = "entry (g=" + std::to_string(key.genus) + ", alpha=" + std::to_string(key.alpha + 1) +
                            ", d=" + std::to_string(key.d) + ")";
        if (key.alpha < 0 || key.alpha >= d.n) throw ValidationError(label + " has alpha out of range");
        if (key.genus < 0 || key.genus > t.genus_max) throw ValidationError(label + " lies outside genus_max");
        if (key.d < 0 || (key.genus > 0 && key.d > t.d_max)) throw ValidationError(label + " lies outside d_max");
        int sum = 0;
        for (const auto& [a, b] : key.points) {
            if (a < 0 || a >= d.n || b < 0) throw ValidationError(label + " has a malformed point");
            sum += b;
        }
        if (sum != 2 * key.genus) throw ValidationError(label + " violates sum b_i = 2g");
        if (static_cast<int>(key.points.size()) + 2 * key.genus < 2)
            throw ValidationError(label + " is in the unstable range");
        if (key.genus == 0) {
            TruncationPolicy wide{0, std::max(policy.u0_cap, static_cast<int>(key.points.size()))};
            DiffPoly theta = genus0_density(d, key.alpha, key.d, wide);
            Rational expected = theta.coefficient(point_monomial(key.points)) * multiplicity_factorial(key.points);
            if (expected != value) throw ValidationError(label + " disagrees with the genus-0 potential");
        }
    }
}

// ---------------------------------------------------------------------------
// Genus-0 data and Hamiltonian densities

std::vector<std::vector<DiffPoly>> structure_constants(const CohFTDescriptor& d, TruncationPolicy policy)
{
    DiffPoly f0 = d.f0(policy);
    int n = d.n;
    std::vector<DiffPoly> lower(n * n * n, DiffPoly(policy));
    for (int a = 0; a < n; ++a) {
        DiffPoly fa = partial(f0, {a, 0});
        for (int b = 0; b < n; ++b) {
            DiffPoly fab = partial(fa, {b, 0});
            for (int c = 0; c < n; ++c) lower[(a * n + b) * n + c] = partial(fab, {c, 0});
        }
    }
    std::vector<std::vector<DiffPoly>> out(n, std::vector<DiffPoly>(n * n, DiffPoly(policy)));
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
            if (d.eta_inv(m, k) == 0) continue;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) out[m][a * n + b] += d.eta_inv(m, k) * lower[(k * n + a) * n + b];
        }
    return out;
}

DiffPoly genus0_density(const CohFTDescriptor& d, int alpha, int deg, TruncationPolicy policy)
{
    TruncationPolicy g0{0, policy.u0_cap};
    int n = d.n;
    DiffPoly theta(g0);
    for (int k = 0; k < n; ++k) theta += d.eta(alpha, k) * DiffPoly::variable({k, 0}, g0);
    auto c = structure_constants(d, g0);
    for (int step = 0; step <= deg; ++step) {
        std::vector<DiffPoly> grad;
        for (int m = 0; m < n; ++m) grad.push_back(partial(theta, {m, 0}));
        std::vector<DiffPoly> hessian(n * n, DiffPoly(g0));
        for (int b = 0; b < n; ++b)
            for (int e = 0; e < n; ++e)
                for (int m = 0; m < n; ++m) hessian[b * n + e] += c[m][b * n + e] * grad[m];
        // integrate with the Euler identity u^b u^e d_b d_e f = k (k - 1) f on degree-k parts
        DiffPoly raw(g0);
        for (int b = 0; b < n; ++b)
            for (int e = 0; e < n; ++e)
                raw += DiffPoly::variable({b, 0}, g0) * DiffPoly::variable({e, 0}, g0) * hessian[b * n + e];
        DiffPoly next(g0);
        for (const auto& [m, coeff] : raw.terms()) {
            long k = m.total_degree();
            next.add_term(m, coeff / (k * (k - 1)));
        }
        for (int b = 0; b < n; ++b)
            for (int e = 0; e < n; ++e) {
                DiffPoly diff = partial(partial(next, {b, 0}), {e, 0}) - hessian[b * n + e];
                for (const auto& [m, coeff] : diff.terms())
                    if (m.total_degree() <= g0.u0_cap - 2)
                        throw IntegrabilityFailure("genus-0 recursion for theta_{" + std::to_string(alpha + 1) + "," +
                                                   std::to_string(step) + "} is not integrable at (" +
                                                   std::to_string(b + 1) + "," + std::to_string(e + 1) + ")");
            }
        theta = next;
    }
    return theta.with_truncation(policy);
}

DiffPoly g_density(const CohFTDescriptor& d, int alpha, int deg, TruncationPolicy policy)
{
    if (alpha < 0 || alpha >= d.n) throw std::out_of_range("field index out of range");
    if (deg < -1) throw std::out_of_range("d must be at least -1");
    if (deg == -1) {
        DiffPoly f(policy);
        for (int k = 0; k < d.n; ++k) f += d.eta(alpha, k) * DiffPoly::variable({k, 0}, policy);
        return f;
    }
    DiffPoly f = genus0_density(d, alpha, deg, policy);
    for (int g = 1; g <= policy.genus_cap; ++g) {
        if (g > d.tables.genus_max || deg > d.tables.d_max)
            throw TableGap("no table data for g=" + std::to_string(g) + ", alpha=" + std::to_string(alpha + 1) +
                           ", d=" + std::to_string(deg) + " (tables cover genus <= " +
                           std::to_string(d.tables.genus_max) + ", d <= " + std::to_string(d.tables.d_max) + ")");
        for (auto it = d.tables.entries.lower_bound(TableKey{g, alpha, deg, {}});
             it != d.tables.entries.end() && it->first.genus == g && it->first.alpha == alpha && it->first.d == deg;
             ++it) {
            const auto& points = it->first.points;
            f.add_term(point_monomial(points).with_eps(2 * g), it->second / multiplicity_factorial(points));
        }
    }
    return f;
}

LocalFunctional build_g(const CohFTDescriptor& d, int alpha, int deg, TruncationPolicy policy)
{
    return LocalFunctional(g_density(d, alpha, deg, policy),
                           "g_{" + std::to_string(alpha + 1) + "," + std::to_string(deg) + "}");
}

// ---------------------------------------------------------------------------
// Builtins

std::vector<std::string> builtin_names()
{
    return {"trivial_kdv", "two_field_genus0"};
}

CohFTDescriptor builtin_descriptor(const std::string& name)
{
    CohFTDescriptor d;
    d.name = name;
    if (name == "trivial_kdv") {
        d.n = 1;
        d.eta = RationalMatrix::identity(1);
        d.unit = {1};
        d.hom = HomogeneityData{{0}, 0, {0}};
        d.f0_text = "1/6 * u[1,0]^3";
        // lambda_1 DR_1 contributes 1/24 per a_i^2 and nothing to mixed a_i a_j
        d.tables.genus_max = 1;
        d.tables.d_max = 5;
        for (int deg = 0; deg <= d.tables.d_max; ++deg) {
            TableKey key{1, 0, deg, {}};
            for (int i = 0; i < deg; ++i) key.points.emplace_back(0, 0);
            key.points.emplace_back(0, 2);
            d.tables.entries[key] = Rational(1, 24);
        }
        d.metadata["cohft"] = "trivial (c_{g,n} = 1), the KdV case";
        d.metadata["semisimple"] = "true";
        d.metadata["genus1_source"] = "coefficient of a_i^2 in the lambda_1 DR_1 integrals; the tests re-derive the "
                                      "entries from the recursion and commutativity";
    } else if (name == "two_field_genus0") {
        d.n = 2;
        d.eta = RationalMatrix(2, 2);
        d.eta(0, 1) = 1;
        d.eta(1, 0) = 1;
        d.unit = {1, 0};
        d.hom = HomogeneityData{{0, Rational(1, 3)}, Rational(1, 3), {1, 0}};
        d.f0_text = "1/2 * u[1,0]^2 * u[2,0] + 1/72 * u[2,0]^4";
        d.tables.genus_max = 0;
        d.tables.d_max = 0;
        d.metadata["cohft"] = "genus-0 part of the A2 Frobenius manifold shifted along the unit";
        d.metadata["semisimple"] = "true (e_2 * e_2 = u^2/3 e_1)";
    } else {
        throw ParseError("unknown builtin descriptor '" + name + "'");
    }
    validate(d);
    return d;
}

} // namespace drham
