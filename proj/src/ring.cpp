#include "drham/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "drham/errors.hpp"

namespace drham {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::variable(VarIndex v, int exponent)
{
    Monomial m;
    if (exponent != 0) m.factors_.push_back({v, exponent});
    return m;
}

Monomial Monomial::epsilon(int k)
{
    Monomial m;
    m.eps_ = k;
    return m;
}

int Monomial::exponent(VarIndex v) const
{
    auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                               [](const Factor& f, VarIndex x) { return f.first < x; });
    return (it != factors_.end() && it->first == v) ? it->second : 0;
}

int Monomial::u0_degree() const
{
    int s = 0;
    for (const auto& [v, e] : factors_)
        if (v.d == 0) s += e;
    return s;
}

int Monomial::total_degree() const
{
    int s = 0;
    for (const auto& [v, e] : factors_) s += e;
    return s;
}

int Monomial::diff_degree() const
{
    int s = 0;
    for (const auto& [v, e] : factors_) s += v.d * e;
    return s;
}

int Monomial::weight() const
{
    int s = 0;
    for (const auto& [v, e] : factors_) s += (v.d + 1) * e;
    return s;
}

Monomial Monomial::with_exponent(VarIndex v, int exponent) const
{
    Monomial m = *this;
    auto it = std::lower_bound(m.factors_.begin(), m.factors_.end(), v,
                               [](const Factor& f, VarIndex x) { return f.first < x; });
    if (it != m.factors_.end() && it->first == v) {
        if (exponent == 0)
            m.factors_.erase(it);
        else
            it->second = exponent;
    } else if (exponent != 0) {
        m.factors_.insert(it, {v, exponent});
    }
    return m;
}

Monomial Monomial::with_eps(int k) const
{
    Monomial m = *this;
    m.eps_ = k;
    return m;
}

Monomial operator*(const Monomial& a, const Monomial& b)
{
    Monomial r;
    r.eps_ = a.eps_ + b.eps_;
    r.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
        if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
            r.factors_.push_back(*i++);
        } else if (i == a.factors_.end() || j->first < i->first) {
            r.factors_.push_back(*j++);
        } else {
            int e = i->second + j->second;
            if (e != 0) r.factors_.push_back({i->first, e});
            ++i;
            ++j;
        }
    }
    return r;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const
{
    if (a.eps_power() != b.eps_power()) return a.eps_power() < b.eps_power();
    int da = a.total_degree();
    int db = b.total_degree();
    if (da != db) return da > db;
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    std::size_t n = std::min(fa.size(), fb.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (fa[i].first != fb[i].first) return fa[i].first < fb[i].first;
        if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second;
    }
    return fa.size() < fb.size();
}

bool admits(const TruncationPolicy& policy, const Monomial& m)
{
    return m.eps_power() <= policy.max_eps() && m.u0_degree() <= policy.u0_cap;
}

// ---------------------------------------------------------------------------
// DiffPoly

DiffPoly DiffPoly::constant(const Rational& c, TruncationPolicy policy)
{
    DiffPoly p(policy);
    p.add_term(Monomial{}, c);
    return p;
}

DiffPoly DiffPoly::variable(VarIndex v, TruncationPolicy policy)
{
    DiffPoly p(policy);
    p.add_term(Monomial::variable(v), 1);
    return p;
}

DiffPoly DiffPoly::epsilon(int k, TruncationPolicy policy)
{
    DiffPoly p(policy);
    p.add_term(Monomial::epsilon(k), 1);
    return p;
}

DiffPoly DiffPoly::monomial(const Monomial& m, const Rational& c, TruncationPolicy policy)
{
    DiffPoly p(policy);
    p.add_term(m, c);
    return p;
}

void DiffPoly::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0 || !admits(policy_, m)) return;
    for (const auto& [v, e] : m.factors())
        if (e < 0 && v != kLaurentVar)
            throw std::invalid_argument("negative exponent is only allowed on u^1_1");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (inserted) {
        it->second.canonicalize();
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational DiffPoly::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void require_same_truncation(const DiffPoly& a, const DiffPoly& b)
{
    if (!(a.truncation() == b.truncation()))
        throw TruncationMismatch("policies (G=" + std::to_string(a.truncation().genus_cap) +
                                 ", M=" + std::to_string(a.truncation().u0_cap) + ") and (G=" +
                                 std::to_string(b.truncation().genus_cap) +
                                 ", M=" + std::to_string(b.truncation().u0_cap) + ") differ");
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& other)
{
    require_same_truncation(*this, other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& other)
{
    require_same_truncation(*this, other);
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

DiffPoly& DiffPoly::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coeff] : terms_) coeff *= c;
    return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b)
{
    require_same_truncation(a, b);
    DiffPoly r(a.policy_);
    const int max_eps = a.policy_.max_eps();
    const int cap = a.policy_.u0_cap;
    for (const auto& [ma, ca] : a.terms_) {
        const int ea = ma.eps_power();
        const int ua = ma.u0_degree();
        for (const auto& [mb, cb] : b.terms_) {
            if (ea + mb.eps_power() > max_eps) break; // b is sorted by eps ascending
            if (ua + mb.u0_degree() > cap) continue;
            r.add_term(ma * mb, ca * cb);
        }
    }
    return r;
}

DiffPoly& DiffPoly::operator*=(const DiffPoly& other)
{
    *this = *this * other;
    return *this;
}

bool operator==(const DiffPoly& a, const DiffPoly& b)
{
    return a.policy_ == b.policy_ && a.terms_ == b.terms_;
}

DiffPoly DiffPoly::eps_coefficient(int k) const
{
    DiffPoly r(policy_);
    for (const auto& [m, c] : terms_)
        if (m.eps_power() == k) r.terms_.emplace(m.without_eps(), c);
    return r;
}

DiffPoly DiffPoly::at_origin() const
{
    DiffPoly r(policy_);
    for (const auto& [m, c] : terms_)
        if (!m.has_factors()) r.terms_.emplace(m, c);
    return r;
}

int DiffPoly::min_eps_power() const
{
    return terms_.empty() ? -1 : terms_.begin()->first.eps_power();
}

bool DiffPoly::is_polynomial() const
{
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m.factors())
            if (e < 0) return false;
    return true;
}

bool DiffPoly::has_odd_eps() const
{
    for (const auto& [m, c] : terms_)
        if (m.eps_power() % 2 != 0) return true;
    return false;
}

int DiffPoly::max_order(int alpha) const
{
    int best = -1;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m.factors())
            if (v.alpha == alpha) best = std::max(best, v.d);
    return best;
}

int DiffPoly::field_count() const
{
    int n = 0;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m.factors()) n = std::max(n, v.alpha + 1);
    return n;
}

DiffPoly DiffPoly::with_truncation(TruncationPolicy policy) const
{
    DiffPoly r(policy);
    for (const auto& [m, c] : terms_) r.add_term(m, c);
    return r;
}

// ---------------------------------------------------------------------------
// Calculus

DiffPoly partial(const DiffPoly& f, VarIndex x)
{
    DiffPoly r(f.truncation());
    for (const auto& [m, c] : f.terms()) {
        int e = m.exponent(x);
        if (e == 0) continue;
        r.add_term(m.with_exponent(x, e - 1), c * e);
    }
    return r;
}

DiffPoly dx(const DiffPoly& f)
{
    DiffPoly r(f.truncation());
    for (const auto& [m, c] : f.terms()) {
        for (const auto& [v, e] : m.factors()) {
            Monomial lowered = m.with_exponent(v, e - 1);
            VarIndex next{v.alpha, v.d + 1};
            r.add_term(lowered * Monomial::variable(next), c * e);
        }
    }
    return r;
}

DiffPoly dx(const DiffPoly& f, int times)
{
    DiffPoly r = f;
    for (int i = 0; i < times; ++i) r = dx(r);
    return r;
}

DiffPoly pow(const DiffPoly& f, int exponent)
{
    if (exponent < 0) throw std::invalid_argument("pow: negative exponent");
    DiffPoly result = DiffPoly::constant(1, f.truncation());
    DiffPoly base = f;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

GradingReport grading(const DiffPoly& f)
{
    GradingReport g;
    for (const auto& [m, c] : f.terms()) {
        g.diff_degrees.insert(m.diff_degree());
        g.eps_degrees.insert(m.eps_power());
        g.combined_degrees.insert(m.combined_degree());
    }
    g.homogeneous = g.combined_degrees.size() <= 1;
    return g;
}

namespace {

class JetSubstitution {
public:
    JetSubstitution(const std::vector<DiffPoly>& images, TruncationPolicy policy)
        : policy_(policy)
    {
        derivs_.reserve(images.size());
        for (const auto& img : images) derivs_.push_back({img});
    }

    const DiffPoly& image(VarIndex v)
    {
        if (v.alpha < 0 || v.alpha >= static_cast<int>(derivs_.size()))
            throw DimensionMismatch("substitution has no image for field " +
                                    std::to_string(v.alpha + 1));
        auto& chain = derivs_[v.alpha];
        while (static_cast<int>(chain.size()) <= v.d) chain.push_back(dx(chain.back()));
        return chain[v.d];
    }

    const DiffPoly& power(VarIndex v, int e)
    {
        auto& cache = powers_[{v, e}];
        if (cache.empty()) {
            if (e > 0) {
                cache.push_back(e == 1 ? image(v) : power(v, e - 1) * image(v));
            } else {
                cache.push_back(negative_power(v, -e));
            }
        }
        return cache.front();
    }

private:
    DiffPoly negative_power(VarIndex v, int k)
    {
        const DiffPoly& img = image(v);
        DiffPoly lead = img.eps_coefficient(0);
        if (lead.size() != 1 || lead.terms().begin()->first != Monomial::variable(kLaurentVar))
            throw NonInvertible("image of u^1_1 must be c*x^1_1 + O(eps) to expand negative powers");
        Rational c = lead.terms().begin()->second;
        DiffPoly s = img - lead;
        if (s.min_eps_power() == 0)
            throw NonInvertible("correction to u^1_1 image must vanish at eps = 0");
        // (c x + s)^(-k) = sum_j C(-k, j) c^(-k-j) x^(-k-j) s^j
        DiffPoly result(policy_);
        DiffPoly s_pow = DiffPoly::constant(1, policy_);
        Rational c_inv = 1 / c;
        Rational c_pow = 1;
        for (int i = 0; i < k; ++i) c_pow *= c_inv;
        for (int j = 0; !s_pow.is_zero(); ++j) {
            Rational coeff = binomial(-k, j) * c_pow;
            DiffPoly x_pow = DiffPoly::monomial(Monomial::variable(kLaurentVar, -k - j), coeff, policy_);
            result += x_pow * s_pow;
            s_pow = s_pow * s;
            c_pow *= c_inv;
        }
        return result;
    }

    TruncationPolicy policy_;
    std::vector<std::vector<DiffPoly>> derivs_;
    std::map<std::pair<VarIndex, int>, std::vector<DiffPoly>> powers_;
};

} // namespace

DiffPoly substitute(const DiffPoly& f, const std::vector<DiffPoly>& images)
{
    for (const auto& img : images) require_same_truncation(f, img);
    JetSubstitution sub(images, f.truncation());
    DiffPoly result(f.truncation());
    for (const auto& [m, c] : f.terms()) {
        DiffPoly term = DiffPoly::monomial(Monomial::epsilon(m.eps_power()), c, f.truncation());
        for (const auto& [v, e] : m.factors()) {
            term = term * sub.power(v, e);
            if (term.is_zero()) break;
        }
        result += term;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void append_canonical_term(std::ostringstream& os, const Monomial& m, const Rational& c, bool first)
{
    Rational a = abs(c);
    if (first)
        os << (c < 0 ? "-" : "");
    else
        os << (c < 0 ? " - " : " + ");
    os << to_string(a);
    if (m.eps_power() != 0) {
        os << " * eps";
        if (m.eps_power() != 1) os << "^" << m.eps_power();
    }
    for (const auto& [v, e] : m.factors()) {
        if (v == kLaurentVar && e < 0) {
            os << " * vx1^(" << e << ")";
            continue;
        }
        os << " * u[" << v.alpha + 1 << "," << v.d << "]";
        if (e != 1) os << "^" << e;
    }
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    DiffPoly parse(TruncationPolicy policy)
    {
        DiffPoly result(policy);
        skip();
        if (eof()) throw error("empty polynomial");
        bool first = true;
        while (!eof()) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = (get() == '-') ? -1 : 1;
                skip();
            } else if (!first) {
                throw error("expected '+' or '-'");
            }
            first = false;
            auto [m, c] = parse_term();
            if (sign < 0) c = -c;
            if (m.eps_power() < 0) throw error("negative eps power");
            result.add_term(m, c);
            skip();
        }
        return result;
    }

private:
    std::pair<Monomial, Rational> parse_term()
    {
        Monomial m;
        Rational c = 1;
        bool more = true;
        while (more) {
            skip();
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                c *= parse_number();
            } else if (match("eps")) {
                int k = 1;
                if (try_char('^')) k = parse_int();
                m = m * Monomial::epsilon(k);
            } else if (match("vx1")) {
                if (!try_char('^')) throw error("expected '^' after vx1");
                int e = parse_int();
                m = m * Monomial::variable(kLaurentVar, e);
            } else if (match("u[")) {
                int a = parse_int();
                skip();
                if (!try_char(',')) throw error("expected ','");
                int d = parse_int();
                skip();
                if (!try_char(']')) throw error("expected ']'");
                int e = 1;
                if (try_char('^')) e = parse_int();
                if (a < 1 || d < 0) throw error("bad variable index");
                VarIndex v{a - 1, d};
                if (e < 0 && v != kLaurentVar) throw error("negative exponent");
                m = m * Monomial::variable(v, e);
            } else {
                throw error("unexpected character");
            }
            skip();
            more = try_char('*');
        }
        return {m, c};
    }

    Rational parse_number()
    {
        std::size_t b = pos_;
        while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/')) ++pos_;
        return parse_rational(s_.substr(b, pos_ - b));
    }

    int parse_int()
    {
        skip();
        bool paren = try_char('(');
        skip();
        std::size_t b = pos_;
        if (!eof() && (peek() == '-' || peek() == '+')) ++pos_;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (b == pos_) throw error("expected integer");
        int v = std::stoi(std::string(s_.substr(b, pos_ - b)));
        skip();
        if (paren && !try_char(')')) throw error("expected ')'");
        return v;
    }

    bool match(std::string_view word)
    {
        if (s_.substr(pos_, word.size()) == word) {
            pos_ += word.size();
            return true;
        }
        return false;
    }

    bool try_char(char ch)
    {
        skip();
        if (!eof() && peek() == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip()
    {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    char get() { return s_[pos_++]; }

    ParseError error(const std::string& what) const
    {
        return ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

std::string DiffPoly::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        append_canonical_term(os, m, c, first);
        first = false;
    }
    return os.str();
}

DiffPoly DiffPoly::parse(std::string_view text, TruncationPolicy policy)
{
    return Parser(text).parse(policy);
}

// ---------------------------------------------------------------------------
// Pretty printing

std::string pretty_variable(VarIndex v, const PrettyStyle& style)
{
    std::string base = style.family;
    if (style.latex) {
        std::string s = base;
        if (style.n_fields > 1) s += "^{" + std::to_string(v.alpha + 1) + "}";
        if (v.d > 0) s += "_{" + std::to_string(v.d) + "}";
        return s;
    }
    if (style.n_fields > 1) base += std::to_string(v.alpha + 1);
    if (v.d > 0) base += "_" + std::to_string(v.d);
    return base;
}

std::vector<std::string> pretty_factors(const Monomial& m, const PrettyStyle& style)
{
    std::vector<std::string> out;
    if (m.eps_power() != 0) {
        std::string e = style.latex ? "\\varepsilon" : "eps";
        if (m.eps_power() != 1)
            e += style.latex ? "^{" + std::to_string(m.eps_power()) + "}"
                             : "^" + std::to_string(m.eps_power());
        out.push_back(e);
    }
    for (const auto& [v, e] : m.factors()) {
        std::string s = pretty_variable(v, style);
        if (e != 1) {
            if (style.latex) {
                // u^1_2 squared reads better as (u^{1}_{2})^{2}
                if (style.n_fields > 1) s = "(" + s + ")";
                s += "^{" + std::to_string(e) + "}";
            } else {
                s += (e < 0) ? "^(" + std::to_string(e) + ")" : "^" + std::to_string(e);
            }
        }
        out.push_back(s);
    }
    return out;
}

std::string join_pretty(const std::vector<PrettyTerm>& terms, bool latex)
{
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms) {
        Rational a = abs(t.coeff);
        if (first)
            os << (t.coeff < 0 ? "-" : "");
        else
            os << (t.coeff < 0 ? " - " : " + ");
        first = false;
        bool show_coeff = (a != 1) || t.factors.empty();
        std::string sep = latex ? " " : "*";
        bool need_sep = false;
        if (show_coeff) {
            if (latex && a.get_den() != 1)
                os << "\\frac{" << a.get_num().get_str() << "}{" << a.get_den().get_str() << "}";
            else
                os << to_string(a);
            need_sep = true;
        }
        for (const auto& f : t.factors) {
            if (need_sep) os << sep;
            os << f;
            need_sep = true;
        }
    }
    return os.str();
}

std::string pretty(const DiffPoly& f, const PrettyStyle& style)
{
    std::vector<PrettyTerm> terms;
    terms.reserve(f.size());
    for (const auto& [m, c] : f.terms()) terms.push_back({c, pretty_factors(m, style)});
    return join_pretty(terms, style.latex);
}

} // namespace drham
