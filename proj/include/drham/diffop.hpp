#pragma once

// Scalar and matrix differential operators sum_j f_j dx^j with coefficients on the
// left, their algebra and adjoints, brackets of local functionals, the operators
// L^k_a and Omega-hat^k, and polynomial Miura transformations acting on operators.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "drham/ring.hpp"
#include "drham/varcalc.hpp"

namespace drham {

class DiffOperator {
public:
    explicit DiffOperator(TruncationPolicy policy = {}) : policy_(policy) {}

    static DiffOperator multiplication(const DiffPoly& f);
    /// c * dx^j
    static DiffOperator dx_power(int j, const Rational& c = 1, TruncationPolicy policy = {});

    const TruncationPolicy& truncation() const { return policy_; }
    const std::map<int, DiffPoly>& coeffs() const { return coeffs_; }
    DiffPoly coefficient(int j) const;
    /// Highest order with a nonzero coefficient, -1 for the zero operator.
    int order() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }
    bool is_zero() const { return coeffs_.empty(); }

    void add(int order, const DiffPoly& f);

    DiffPoly apply(const DiffPoly& f) const;

    DiffOperator& operator+=(const DiffOperator& other);
    DiffOperator& operator-=(const DiffOperator& other);
    DiffOperator& operator*=(const Rational& c);
    friend DiffOperator operator+(DiffOperator a, const DiffOperator& b) { return a += b; }
    friend DiffOperator operator-(DiffOperator a, const DiffOperator& b) { return a -= b; }
    friend DiffOperator operator-(DiffOperator a) { return a *= Rational(-1); }
    friend DiffOperator operator*(const Rational& c, DiffOperator a) { return a *= c; }
    friend bool operator==(const DiffOperator& a, const DiffOperator& b);

    /// Applies fn to every coefficient.
    DiffOperator map_coeffs(const std::function<DiffPoly(const DiffPoly&)>& fn) const;
    DiffOperator eps_coefficient(int k) const;
    /// The same operator under another policy; coefficients are re-truncated.
    DiffOperator with_truncation(TruncationPolicy policy) const;

    /// `(<poly>) * Dx^j + ...` using the canonical polynomial format.
    std::string to_string() const;

private:
    TruncationPolicy policy_;
    std::map<int, DiffPoly> coeffs_;
};

DiffOperator compose(const DiffOperator& a, const DiffOperator& b);
DiffOperator adjoint(const DiffOperator& a);
/// Operator with every coefficient differentiated in x (the K_x of a K).
DiffOperator coeff_dx(const DiffOperator& a);

/// Readable form: `u*Dx + 1/2*u_1 + 1/8*eps^2*Dx^3`. Terms are ordered by eps power,
/// then by descending order in Dx.
std::string pretty(const DiffOperator& a, const PrettyStyle& style = {});

class MatrixDiffOperator {
public:
    MatrixDiffOperator() = default;
    MatrixDiffOperator(int n, TruncationPolicy policy);

    /// M * dx^j for a constant matrix M.
    static MatrixDiffOperator constant(const RationalMatrix& m, int j, TruncationPolicy policy);
    static MatrixDiffOperator identity(int n, TruncationPolicy policy);

    int size() const { return n_; }
    const TruncationPolicy& truncation() const { return policy_; }

    DiffOperator& operator()(int row, int col) { return entries_.at(row * n_ + col); }
    const DiffOperator& operator()(int row, int col) const { return entries_.at(row * n_ + col); }

    std::vector<DiffPoly> apply(const std::vector<DiffPoly>& v) const;

    MatrixDiffOperator& operator+=(const MatrixDiffOperator& other);
    MatrixDiffOperator& operator-=(const MatrixDiffOperator& other);
    MatrixDiffOperator& operator*=(const Rational& c);
    friend MatrixDiffOperator operator+(MatrixDiffOperator a, const MatrixDiffOperator& b) { return a += b; }
    friend MatrixDiffOperator operator-(MatrixDiffOperator a, const MatrixDiffOperator& b) { return a -= b; }
    friend MatrixDiffOperator operator*(const Rational& c, MatrixDiffOperator a) { return a *= c; }
    friend bool operator==(const MatrixDiffOperator& a, const MatrixDiffOperator& b);

    bool is_zero() const;
    MatrixDiffOperator map_coeffs(const std::function<DiffPoly(const DiffPoly&)>& fn) const;
    MatrixDiffOperator eps_coefficient(int k) const;
    MatrixDiffOperator at_eps_zero() const { return eps_coefficient(0); }
    MatrixDiffOperator with_truncation(TruncationPolicy policy) const;

private:
    int n_ = 0;
    TruncationPolicy policy_;
    std::vector<DiffOperator> entries_;
};

MatrixDiffOperator compose(const MatrixDiffOperator& a, const MatrixDiffOperator& b);
MatrixDiffOperator matrix_adjoint(const MatrixDiffOperator& k);
MatrixDiffOperator coeff_dx(const MatrixDiffOperator& a);

/// First place where two operators differ: lowest eps order, then row, column.
struct OperatorMismatch {
    bool equal = true;
    int row = -1;
    int col = -1;
    int eps_order = -1;
    std::string lhs;
    std::string rhs;
};

OperatorMismatch compare(const MatrixDiffOperator& a, const MatrixDiffOperator& b);

/// { f, g }_K = int  df/du^m K^{mn} dg/du^n dx
LocalFunctional bracket(const LocalFunctional& f, const LocalFunctional& g, const MatrixDiffOperator& k);
/// K^{a m} delta h / delta u^m for every a.
std::vector<DiffPoly> hamiltonian_flow(const MatrixDiffOperator& k, const LocalFunctional& h);

/// L^k_a(f) = sum_{i >= k} C(i, k) df/du^a_i dx^{i-k}; zero for k < 0.
DiffOperator l_op(const DiffPoly& f, int alpha, int k);
/// Omega-hat^k(h)^{ab} = eta^{am} eta^{bn} L^k_n(delta h / delta u^m)
MatrixDiffOperator omega_hat(const LocalFunctional& h, int k, const RationalMatrix& eta_inv);

/// A polynomial change of variables w^a = images[a](u, eps).
class MiuraTransform {
public:
    explicit MiuraTransform(std::vector<DiffPoly> images);
    static MiuraTransform identity(int n, TruncationPolicy policy);

    int size() const { return static_cast<int>(images_.size()); }
    const std::vector<DiffPoly>& images() const { return images_; }
    const TruncationPolicy& truncation() const { return images_.front().truncation(); }

    /// Jacobian of the eps^0 part at the origin.
    RationalMatrix linear_part() const;

private:
    std::vector<DiffPoly> images_;
};

/// f(u) rewritten in w: substitute u^g_c -> dx^c images[g].
DiffPoly pull_back(const DiffPoly& f, const MiuraTransform& m);
/// (second after first)(u) = second(first(u)).
MiuraTransform miura_compose(const MiuraTransform& second, const MiuraTransform& first);
MiuraTransform miura_inverse(const MiuraTransform& m);
/// Jacobian operator J^a_m = sum_p dw^a/du^m_p dx^p.
MatrixDiffOperator miura_jacobian(const std::vector<DiffPoly>& images);
/// K_w = (J K J^dagger) evaluated at u = u(w).
MatrixDiffOperator miura_pushforward(const MatrixDiffOperator& k, const MiuraTransform& m);

} // namespace drham
