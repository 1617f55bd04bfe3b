#include "drham/report.hpp"

#include <regex>
#include <sstream>

#include "drham/errors.hpp"
#include "json.hpp"

namespace drham {

using nlohmann::ordered_json;

namespace {

PrettyStyle style_for(int n, bool latex)
{
    return {n, "u", latex};
}

ordered_json config_json(const RunConfig& c)
{
    ordered_json checks = ordered_json::array();
    for (const auto& name : c.checks) checks.push_back(name);
    return {{"cohft", c.cohft}, {"genus_cap", c.genus_cap}, {"u0_cap", c.u0_cap},
            {"d_max", c.d_max}, {"checks", checks},         {"seed", c.seed}};
}

std::string header(const RunConfig& c, const std::string& descriptor)
{
    return descriptor + " (G=" + std::to_string(c.genus_cap) + ", M=" + std::to_string(c.u0_cap) +
           ", d_max=" + std::to_string(c.d_max) + ")";
}

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string rational_text(const Rational& q)
{
    return to_string(q);
}

std::string rational_latex(const Rational& q)
{
    if (q.get_den() == 1) return q.get_num().get_str();
    std::string sign = q < 0 ? "-" : "";
    mpz_class num = abs(q.get_num());
    return sign + "\\frac{" + num.get_str() + "}{" + q.get_den().get_str() + "}";
}

std::string matrix_text(const RationalMatrix& m)
{
    std::string out = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out += i ? "; " : "";
        for (std::size_t k = 0; k < m.cols(); ++k) out += (k ? ", " : "") + rational_text(m(i, k));
    }
    return out + "]";
}

std::string matrix_latex(const RationalMatrix& m)
{
    std::string out = "\\begin{pmatrix}";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out += i ? " \\\\ " : " ";
        for (std::size_t k = 0; k < m.cols(); ++k) out += (k ? " & " : "") + rational_latex(m(i, k));
    }
    return out + " \\end{pmatrix}";
}

ordered_json matrix_json(const RationalMatrix& m)
{
    ordered_json a = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(rational_text(m(i, k)));
        a.push_back(row);
    }
    return a;
}

template <class F>
std::string join(const std::vector<Rational>& v, F fmt)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
    return out;
}

std::string coverage_text(const CohFTDescriptor& d)
{
    std::string s = "genus 0 from f0";
    if (d.tables.genus_max > 0)
        s += "; genus 1.." + std::to_string(d.tables.genus_max) + " for d <= " + std::to_string(d.tables.d_max) +
             " (" + std::to_string(d.tables.entries.size()) + " entries)";
    return s;
}

RationalMatrix mu_matrix(const CohFTDescriptor& d)
{
    RationalMatrix m(d.n, d.n);
    for (int a = 0; a < d.n; ++a) m(a, a) = d.hom.mu(a);
    return m;
}

std::vector<Rational> mu_vector(const CohFTDescriptor& d)
{
    std::vector<Rational> v;
    for (int a = 0; a < d.n; ++a) v.push_back(d.hom.mu(a));
    return v;
}

std::string verdict_line(const Verdict& v)
{
    std::string line = pad(v.ok ? "ok" : "FAIL", 6) + pad(v.check, 19) + v.subject;
    if (v.ok) return line + "  [through eps^" + std::to_string(v.epsilon_order) + "]";
    line += "  [eps^" + std::to_string(v.epsilon_order) + "]";
    if (!v.entry.empty()) line += " at " + v.entry;
    if (!v.witness.empty()) line += ": " + v.witness;
    return line;
}

} // namespace

OutputFormat parse_format(const std::string& name)
{
    if (name == "text") return OutputFormat::text;
    if (name == "json") return OutputFormat::json;
    if (name == "latex") return OutputFormat::latex;
    throw ParseError("unknown output format '" + name + "'");
}

std::string latex_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\textbackslash{}"; break;
        case '^': out += "\\^{}"; break;
        case '~': out += "\\~{}"; break;
        case '_': case '{': case '}': case '#': case '$': case '%': case '&':
            out += '\\';
            out += c;
            break;
        default: out += c;
        }
    }
    return out;
}

std::string render_check(const RunConfig& config, const std::string& descriptor, const std::vector<Verdict>& verdicts)
{
    std::size_t passed = 0;
    for (const auto& v : verdicts) passed += v.ok ? 1 : 0;
    bool ok = passed == verdicts.size();
    std::ostringstream out;
    switch (config.output) {
    case OutputFormat::json: {
        ordered_json list = ordered_json::array();
        for (const auto& v : verdicts)
            list.push_back({{"check", v.check},
                            {"descriptor", v.descriptor},
                            {"subject", v.subject},
                            {"epsilon_order", v.epsilon_order},
                            {"status", v.ok ? "ok" : "fail"},
                            {"entry", v.entry},
                            {"witness", v.witness}});
        ordered_json j = {{"format", "drham-report/1"}, {"command", "check"}, {"descriptor", descriptor},
                          {"config", config_json(config)}, {"ok", ok}, {"passed", passed},
                          {"total", verdicts.size()}, {"verdicts", list}};
        out << j.dump(2) << "\n";
        break;
    }
    case OutputFormat::latex:
        out << "% drham check: " << header(config, descriptor) << "\n";
        out << "\\begin{tabular}{llll}\n\\hline\nstatus & check & subject & $\\varepsilon$ order \\\\\n\\hline\n";
        for (const auto& v : verdicts) {
            out << (v.ok ? "ok" : "\\textbf{fail}") << " & \\texttt{" << latex_escape(v.check) << "} & "
                << latex_escape(v.subject) << " & " << v.epsilon_order << " \\\\\n";
            if (!v.ok)
                out << "\\multicolumn{4}{l}{\\texttt{" << latex_escape(v.entry + ": " + v.witness) << "}} \\\\\n";
        }
        out << "\\hline\n\\end{tabular}\n";
        out << "% " << passed << "/" << verdicts.size() << " ok\n";
        break;
    case OutputFormat::text:
        out << "drham check: " << header(config, descriptor) << "\n";
        for (const auto& v : verdicts) out << verdict_line(v) << "\n";
        out << passed << "/" << verdicts.size() << " ok\n";
        break;
    }
    return out.str();
}

std::string render_error(const RunConfig& config, const std::string& command, const std::exception& error)
{
    std::string kind = "Error", message = error.what();
    if (auto* e = dynamic_cast<const Error*>(&error)) {
        kind = e->kind();
        if (message.rfind(kind + ": ", 0) == 0) message = message.substr(kind.size() + 2);
    }
    std::ostringstream out;
    switch (config.output) {
    case OutputFormat::json: {
        ordered_json j = {{"format", "drham-report/1"}, {"command", command}, {"descriptor", config.cohft},
                          {"config", config_json(config)}, {"ok", false},
                          {"error", {{"kind", kind}, {"message", message}}}};
        out << j.dump(2) << "\n";
        break;
    }
    case OutputFormat::latex:
        out << "% drham " << command << " failed\n\\texttt{" << latex_escape(kind + ": " + message) << "}\n";
        break;
    case OutputFormat::text: out << "drham " << command << ": " << kind << ": " << message << "\n"; break;
    }
    return out.str();
}

std::string render_describe(const RunConfig& config, const CohFTDescriptor& d)
{
    std::ostringstream out;
    switch (config.output) {
    case OutputFormat::json: {
        auto vec = [](const std::vector<Rational>& v) {
            ordered_json a = ordered_json::array();
            for (const auto& x : v) a.push_back(rational_text(x));
            return a;
        };
        ordered_json meta = ordered_json::object();
        for (const auto& [k, v] : d.metadata) meta[k] = v;
        ordered_json j = {{"format", "drham-describe/1"},
                          {"descriptor", d.name},
                          {"n_fields", d.n},
                          {"eta", matrix_json(d.eta)},
                          {"unit", vec(d.unit)},
                          {"q", vec(d.hom.q)},
                          {"delta", rational_text(d.hom.delta)},
                          {"mu", vec(mu_vector(d))},
                          {"r", vec(d.hom.r)},
                          {"a_lower", matrix_json(d.a_lower)},
                          {"a_upper", matrix_json(d.a_upper)},
                          {"f0", pretty(d.f0({0, 1 << 12}), style_for(d.n, false))},
                          {"tables", {{"genus_max", d.tables.genus_max}, {"d_max", d.tables.d_max},
                                      {"entries", d.tables.entries.size()}}},
                          {"truncation", {{"genus_cap", config.genus_cap}, {"u0_cap", config.u0_cap},
                                          {"d_max", config.d_max}}},
                          {"metadata", meta}};
        out << j.dump(2) << "\n";
        break;
    }
    case OutputFormat::latex:
        out << "% drham describe: " << d.name << "\n\\begin{align*}\n";
        out << "N &= " << d.n << " \\\\\n";
        out << "\\eta &= " << matrix_latex(d.eta) << " \\\\\n";
        out << "\\mu &= " << matrix_latex(mu_matrix(d)) << " \\\\\n";
        out << "r &= (" << join(d.hom.r, rational_latex) << ") \\\\\n";
        out << "A^\\beta_\\alpha &= " << matrix_latex(d.a_upper) << " \\\\\n";
        out << "F_0 &= " << pretty(d.f0({0, 1 << 12}), style_for(d.n, true)) << "\n\\end{align*}\n";
        out << "% tables: " << coverage_text(d) << "\n";
        out << "% truncation: G=" << config.genus_cap << ", M=" << config.u0_cap << ", d_max=" << config.d_max
            << "\n";
        break;
    case OutputFormat::text:
        out << "descriptor: " << d.name << "\n";
        out << "N = " << d.n << "\n";
        out << "eta = " << matrix_text(d.eta) << "\n";
        out << "unit = (" << join(d.unit, rational_text) << ")\n";
        out << "q = (" << join(d.hom.q, rational_text) << "), delta = " << rational_text(d.hom.delta) << "\n";
        out << "mu = (" << join(mu_vector(d), rational_text) << ")\n";
        out << "r = (" << join(d.hom.r, rational_text) << ")\n";
        out << "A^b_a = " << matrix_text(d.a_upper) << "  (row b, column a)\n";
        out << "F0 = " << pretty(d.f0({0, 1 << 12}), style_for(d.n, false)) << "\n";
        out << "tables: " << coverage_text(d) << "\n";
        out << "truncation: G=" << config.genus_cap << ", M=" << config.u0_cap << ", d_max=" << config.d_max
            << "\n";
        for (const auto& [k, v] : d.metadata) out << "metadata." << k << " = " << v << "\n";
        break;
    }
    return out.str();
}

std::string render_export(const RunConfig& config, const HierarchyBundle& bundle, const std::string& object)
{
    const CohFTDescriptor& d = bundle.descriptor;
    if (object == "descriptor") return to_json(d);

    std::optional<DiffPoly> density;
    std::optional<MatrixDiffOperator> op;
    std::smatch match;
    static const std::regex hamiltonian(R"(hamiltonian\(\s*(\d+)\s*,\s*(-?\d+)\s*\))");
    if (object == "gbar") {
        density = bundle.reported(bundle.gbar.density());
    } else if (std::regex_match(object, match, hamiltonian)) {
        int alpha = std::stoi(match[1]) - 1, deg = std::stoi(match[2]);
        if (alpha < 0 || alpha >= d.n) throw ParseError("hamiltonian index out of range in '" + object + "'");
        density = build_g(d, alpha, deg, bundle.policy).density();
    } else if (object == "kdr") {
        op = bundle.reported(bundle.kdr);
    } else if (object == "kdr_alt") {
        op = bundle.reported(build_kdr_alt(bundle));
    } else if (object == "k2_genus0") {
        op = bundle.reported(build_principal(bundle).k2);
    } else {
        throw ParseError("unknown export object '" + object +
                         "' (expected gbar, kdr, kdr_alt, k2_genus0, descriptor or hamiltonian(a,d))");
    }

    std::ostringstream out;
    PrettyStyle text = style_for(d.n, false), tex = style_for(d.n, true);
    switch (config.output) {
    case OutputFormat::json: {
        ordered_json j = {{"format", "drham-export/1"},
                          {"object", object},
                          {"descriptor", d.name},
                          {"truncation", {{"genus_cap", config.genus_cap}, {"u0_cap", config.u0_cap}}}};
        if (density) {
            j["kind"] = "density";
            j["canonical"] = density->to_string();
            j["pretty"] = pretty(*density, text);
        } else {
            j["kind"] = "operator";
            ordered_json canonical = ordered_json::array(), shown = ordered_json::array();
            for (int a = 0; a < d.n; ++a) {
                ordered_json row = ordered_json::array(), prow = ordered_json::array();
                for (int b = 0; b < d.n; ++b) {
                    row.push_back((*op)(a, b).to_string());
                    prow.push_back(pretty((*op)(a, b), text));
                }
                canonical.push_back(row);
                shown.push_back(prow);
            }
            j["canonical"] = canonical;
            j["pretty"] = shown;
        }
        out << j.dump(2) << "\n";
        break;
    }
    case OutputFormat::latex:
        if (density) {
            out << "\\[ " << pretty(*density, tex) << " \\]\n";
        } else if (d.n == 1) {
            out << "\\[ " << pretty((*op)(0, 0), tex) << " \\]\n";
        } else {
            out << "\\[ \\begin{pmatrix}\n";
            for (int a = 0; a < d.n; ++a) {
                for (int b = 0; b < d.n; ++b) out << (b ? " & " : "  ") << pretty((*op)(a, b), tex);
                out << (a + 1 < d.n ? " \\\\\n" : "\n");
            }
            out << "\\end{pmatrix} \\]\n";
        }
        break;
    case OutputFormat::text:
        if (density) {
            out << pretty(*density, text) << "\n";
        } else if (d.n == 1) {
            out << pretty((*op)(0, 0), text) << "\n";
        } else {
            for (int a = 0; a < d.n; ++a)
                for (int b = 0; b < d.n; ++b)
                    out << "[" << a + 1 << "," << b + 1 << "] " << pretty((*op)(a, b), text) << "\n";
        }
        break;
    }
    return out.str();
}

} // namespace drham
