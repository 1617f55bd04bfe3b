#pragma once

// Differential polynomials that are Laurent in v^1_x, their polynomial/singular
// split, rational and purely singular Miura transformations, and the closed formula
// for the polynomial part of an operator pushed along a purely singular transformation.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drham/diffop.hpp"

namespace drham {

/// sum_i P_i (v^1_x)^i with dP_i/dv^1_x = 0. Stored as a DiffPoly whose only
/// negative exponents sit on v^1_x (the ring already admits them).
class LaurentDiffPoly {
public:
    explicit LaurentDiffPoly(TruncationPolicy policy = {}) : value_(policy) {}
    explicit LaurentDiffPoly(DiffPoly value) : value_(std::move(value)) {}
    /// Throws ValidationError if some P_i depends on v^1_x.
    static LaurentDiffPoly from_components(const std::map<int, DiffPoly>& components, TruncationPolicy policy);

    const DiffPoly& value() const { return value_; }
    const TruncationPolicy& truncation() const { return value_.truncation(); }
    bool is_zero() const { return value_.is_zero(); }
    std::map<int, DiffPoly> components() const;

    friend bool operator==(const LaurentDiffPoly& a, const LaurentDiffPoly& b) { return a.value_ == b.value_; }

private:
    DiffPoly value_;
};

struct PolSingSplit {
    DiffPoly pol;
    LaurentDiffPoly sing;
};

PolSingSplit pol_sing_split(const LaurentDiffPoly& f);
/// Terms with a nonnegative power of v^1_x.
DiffPoly pol_part(const DiffPoly& f);
DiffPoly sing_part(const DiffPoly& f);
MatrixDiffOperator pol_part(const MatrixDiffOperator& k);
LaurentDiffPoly dx_laurent(const LaurentDiffPoly& f);

/// v -> u^a(v, eps) = v^a + sum_k eps^k f^a_k with f^a_k Laurent of degree k.
class RationalMiura {
public:
    explicit RationalMiura(std::vector<DiffPoly> images);
    static RationalMiura identity(int n, TruncationPolicy policy);

    int size() const { return static_cast<int>(images_.size()); }
    const std::vector<DiffPoly>& images() const { return images_; }
    const TruncationPolicy& truncation() const { return images_.front().truncation(); }
    /// images minus the identity
    std::vector<DiffPoly> corrections() const;

private:
    std::vector<DiffPoly> images_;
};

/// (a after b)(v) = a(b(v)): the images of b substituted into those of a.
RationalMiura compose_rational(const RationalMiura& a, const RationalMiura& b);
/// Fixed point of v = u - (a(v) - v), one eps order per step.
RationalMiura invert_rational(const RationalMiura& a);

/// Reason a rational transformation is not purely singular, if any.
std::optional<std::string> purely_singular_violation(const RationalMiura& m);

class PurelySingularMiura {
public:
    /// Throws ValidationError naming the failed condition.
    explicit PurelySingularMiura(RationalMiura base);

    const RationalMiura& base() const { return base_; }
    int size() const { return base_.size(); }
    const std::vector<DiffPoly>& images() const { return base_.images(); }
    /// P^a = pol(v^1_x (u^a(v) - v^a))
    std::vector<DiffPoly> p_vector() const;

private:
    RationalMiura base_;
};

/// pol part of f(u) after u^g_c -> dx^c u^g(v).
DiffPoly pol_of_substitution(const DiffPoly& f, const PurelySingularMiura& m);

/// Entries g^{ab} dx + b^{ab}_c v^c_x split into their pieces.
struct HydrodynamicForm {
    int n = 0;
    std::vector<DiffPoly> g;              ///< n*n, row major
    std::vector<std::vector<DiffPoly>> b; ///< b[c][a*n + b]
};

/// Throws HypothesisViolation if K does not have the first-order hydrodynamic shape.
HydrodynamicForm hydrodynamic_form(const MatrixDiffOperator& k);

/// K + L^1_m(P^a) eta^{mb} dx + L_m(P^a) b^{mb}_1 + b^{an}_1 L_n(P^b)^dagger with
/// eta = dg/dv^1. Throws HypothesisViolation naming the failed condition.
MatrixDiffOperator lemma_s2_pushforward(const MatrixDiffOperator& k, const std::vector<DiffPoly>& p);
MatrixDiffOperator lemma_s2_pushforward(const MatrixDiffOperator& k, const PurelySingularMiura& m);

/// The transformed operator K_u = (J K J^dagger) at v = v(u), Laurent coefficients.
MatrixDiffOperator rational_pushforward(const MatrixDiffOperator& k, const RationalMiura& m);

} // namespace drham
