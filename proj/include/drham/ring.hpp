#pragma once

// Sparse differential polynomials over Q in jet variables u^a_d and the dispersion
// parameter eps, truncated in eps-order and in the degree of the underived variables.
//
// Field indices are 0-based in C++ and 1-based in every text format (u[1,0] is u^1).
// The jet variable u^1_1 may carry negative exponents: that is the Laurent extension
// in v^1_x used by rational Miura transformations. Everything else is polynomial.

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drham/number.hpp"

namespace drham {

struct VarIndex {
    int alpha = 0; ///< field index, 0-based
    int d = 0;     ///< number of x-derivatives

    constexpr auto operator<=>(const VarIndex&) const = default;
};

/// The one variable allowed to appear with negative exponent (u^1_x).
inline constexpr VarIndex kLaurentVar{0, 1};

struct TruncationPolicy {
    int genus_cap = 1; ///< eps powers above 2*genus_cap are dropped
    int u0_cap = 6;    ///< total degree in u^*_0 above this is dropped

    int max_eps() const { return 2 * genus_cap; }
    bool operator==(const TruncationPolicy&) const = default;
};

class Monomial {
public:
    using Factor = std::pair<VarIndex, int>;

    Monomial() = default;
    static Monomial variable(VarIndex v, int exponent = 1);
    static Monomial epsilon(int k);

    const std::vector<Factor>& factors() const { return factors_; }
    int eps_power() const { return eps_; }

    int exponent(VarIndex v) const;
    int u0_degree() const;
    int total_degree() const;
    /// sum of d * exponent
    int diff_degree() const;
    /// sum of (d + 1) * exponent: the eigenvalue of D = sum (n+1) u_n d/du_n
    int weight() const;
    /// diff_degree - eps_power, with deg eps = -1
    int combined_degree() const { return diff_degree() - eps_; }
    bool has_factors() const { return !factors_.empty(); }
    bool is_unit() const { return factors_.empty() && eps_ == 0; }

    Monomial with_exponent(VarIndex v, int exponent) const;
    Monomial with_eps(int k) const;
    Monomial without_eps() const { return with_eps(0); }

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    bool operator==(const Monomial&) const = default;

private:
    std::vector<Factor> factors_; // sorted by VarIndex, exponents nonzero
    int eps_ = 0;
};

/// Canonical term order: eps power ascending, then total degree descending, then
/// lexicographic on the factor list with (alpha, d) ascending and larger exponents first.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

bool admits(const TruncationPolicy& policy, const Monomial& m);

class DiffPoly {
public:
    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    explicit DiffPoly(TruncationPolicy policy = {}) : policy_(policy) {}

    static DiffPoly constant(const Rational& c, TruncationPolicy policy = {});
    static DiffPoly variable(VarIndex v, TruncationPolicy policy = {});
    static DiffPoly epsilon(int k, TruncationPolicy policy = {});
    static DiffPoly monomial(const Monomial& m, const Rational& c, TruncationPolicy policy = {});

    const TruncationPolicy& truncation() const { return policy_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Adds c*m, dropping it if the truncation policy excludes m.
    void add_term(const Monomial& m, const Rational& c);
    Rational coefficient(const Monomial& m) const;

    DiffPoly& operator+=(const DiffPoly& other);
    DiffPoly& operator-=(const DiffPoly& other);
    DiffPoly& operator*=(const Rational& c);
    DiffPoly& operator*=(const DiffPoly& other);

    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator-(DiffPoly a) { return a *= Rational(-1); }
    friend DiffPoly operator*(DiffPoly a, const Rational& c) { return a *= c; }
    friend DiffPoly operator*(const Rational& c, DiffPoly a) { return a *= c; }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
    friend bool operator==(const DiffPoly& a, const DiffPoly& b);

    /// Coefficient of eps^k, returned without eps.
    DiffPoly eps_coefficient(int k) const;
    DiffPoly at_eps_zero() const { return eps_coefficient(0); }
    /// Terms not involving any jet variable (value at u = 0 as a series in eps).
    DiffPoly at_origin() const;
    int min_eps_power() const;

    bool is_polynomial() const;
    bool has_odd_eps() const;
    /// Largest d with u^alpha_d present, or -1.
    int max_order(int alpha) const;
    /// Largest field index present plus one.
    int field_count() const;

    /// Same terms re-filtered under another policy.
    DiffPoly with_truncation(TruncationPolicy policy) const;

    /// Canonical serialization: `coeff * eps^k * u[alpha,d]^e * ...`.
    std::string to_string() const;
    static DiffPoly parse(std::string_view text, TruncationPolicy policy = {});

private:
    TruncationPolicy policy_;
    TermMap terms_;
};

/// Throws TruncationMismatch unless both policies agree.
void require_same_truncation(const DiffPoly& a, const DiffPoly& b);

DiffPoly partial(const DiffPoly& f, VarIndex x);
DiffPoly dx(const DiffPoly& f);
DiffPoly dx(const DiffPoly& f, int times);
DiffPoly pow(const DiffPoly& f, int exponent);

struct GradingReport {
    std::set<int> diff_degrees;
    std::set<int> eps_degrees;
    std::set<int> combined_degrees;
    bool homogeneous = true;
};

GradingReport grading(const DiffPoly& f);

/// Jet substitution u^g_c -> dx^c(images[g]). The image of u^1_1 must be
/// c*x^1_1 + O(eps) when f carries negative powers of u^1_1; those are expanded
/// binomially and terminate by the eps cap.
DiffPoly substitute(const DiffPoly& f, const std::vector<DiffPoly>& images);

/// Renders with readable names (u, u_1, u_2 for one field; u1, u1_2 otherwise).
struct PrettyStyle {
    int n_fields = 1;
    std::string family = "u";
    bool latex = false;
};

std::string pretty(const DiffPoly& f, const PrettyStyle& style = {});
std::string pretty_variable(VarIndex v, const PrettyStyle& style);

/// One printable term: coefficient and already rendered factors.
struct PrettyTerm {
    Rational coeff;
    std::vector<std::string> factors;
};

std::vector<std::string> pretty_factors(const Monomial& m, const PrettyStyle& style);
std::string join_pretty(const std::vector<PrettyTerm>& terms, bool latex);

} // namespace drham
