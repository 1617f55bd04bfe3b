#pragma once

// Poisson and compatibility tests for matrix differential operators through the
// odd-variable formalism: an operator K becomes the bivector 1/2 theta_a K^{ab} theta_b
// and the Jacobi identity becomes the vanishing of a Schouten bracket modulo dx.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drham/diffop.hpp"
#include "drham/verdict.hpp"

namespace drham {

/// theta_alpha^d, the d-th x-derivative of the odd variable paired with u^alpha.
struct OddVar {
    int alpha = 0;
    int d = 0;

    constexpr auto operator<=>(const OddVar&) const = default;
};

/// Strictly increasing list of odd variables; the product in that order.
using OddWord = std::vector<OddVar>;

class SuperDiffPoly {
public:
    explicit SuperDiffPoly(TruncationPolicy policy = {}) : policy_(policy) {}

    static SuperDiffPoly even(const DiffPoly& f);
    static SuperDiffPoly odd(OddVar v, TruncationPolicy policy = {});

    const TruncationPolicy& truncation() const { return policy_; }
    const std::map<OddWord, DiffPoly>& parts() const { return parts_; }
    bool is_zero() const { return parts_.empty(); }
    /// Coefficient of a word; the word must be sorted.
    DiffPoly coefficient(const OddWord& w) const;

    void add(const OddWord& w, const DiffPoly& coeff);

    SuperDiffPoly& operator+=(const SuperDiffPoly& other);
    SuperDiffPoly& operator-=(const SuperDiffPoly& other);
    SuperDiffPoly& operator*=(const Rational& c);
    friend SuperDiffPoly operator+(SuperDiffPoly a, const SuperDiffPoly& b) { return a += b; }
    friend SuperDiffPoly operator-(SuperDiffPoly a, const SuperDiffPoly& b) { return a -= b; }
    friend SuperDiffPoly operator*(const Rational& c, SuperDiffPoly a) { return a *= c; }
    friend SuperDiffPoly operator*(const SuperDiffPoly& a, const SuperDiffPoly& b);
    friend bool operator==(const SuperDiffPoly& a, const SuperDiffPoly& b) { return a.parts_ == b.parts_; }

    SuperDiffPoly eps_coefficient(int k) const;
    SuperDiffPoly with_truncation(TruncationPolicy policy) const;
    int min_eps_power() const;
    int max_odd_order(int alpha) const;

    /// `(<poly>) * th[a,d] * ...`, words in sorted order.
    std::string to_string() const;

private:
    TruncationPolicy policy_;
    std::map<OddWord, DiffPoly> parts_;
};

/// Even derivation with dx theta^d = theta^{d+1}.
SuperDiffPoly dx(const SuperDiffPoly& f);
SuperDiffPoly partial(const SuperDiffPoly& f, VarIndex v);
/// Left derivative: theta_v is moved to the front before it is removed.
SuperDiffPoly partial(const SuperDiffPoly& f, OddVar v);
/// delta / delta theta_alpha = sum_s (-dx)^s d^L / d theta_alpha^s.
SuperDiffPoly odd_var_derivative(const SuperDiffPoly& f, int alpha);
/// sum_{a,s} dx^s(q^a) d f / d u^a_s with the odd factor placed in front.
SuperDiffPoly prolong(const std::vector<SuperDiffPoly>& q, const SuperDiffPoly& f);

/// The odd vector (K theta)^a = sum K^{ab}_j theta_b^j.
std::vector<SuperDiffPoly> apply_to_theta(const MatrixDiffOperator& k);

struct Bivector {
    SuperDiffPoly density;
    MatrixDiffOperator op;
};

/// 1/2 theta_a K^{ab} theta_b for skew K. Throws NotSkew naming the entry and eps order.
Bivector bivector_of(const MatrixDiffOperator& k);
/// Reads K back from the odd variational derivatives of the density.
MatrixDiffOperator operator_of(const Bivector& p, int n);

/// Symmetric bilinear Schouten pairing, normalised so that [P, P] = pr_{K theta} P and
/// [P, Q] = 1/2 (pr_{K_P theta} Q + pr_{K_Q theta} P). Densities are defined modulo dx.
SuperDiffPoly schouten(const Bivector& p, const Bivector& q);

/// First nonvanishing odd variational derivative of a density, by eps order then field.
struct TrivectorWitness {
    bool zero = true;
    int epsilon_order = -1;
    int alpha = -1;
    std::string expression;
};

/// With `report` set, the variational derivatives are judged after re-truncation to it;
/// callers compute at a wider u0 cap so that the projected result is exact.
TrivectorWitness functional_witness(const SuperDiffPoly& density, int n,
                                    std::optional<TruncationPolicy> report = std::nullopt);

Verdict is_poisson(const MatrixDiffOperator& k, const std::string& subject = "K",
                   std::optional<TruncationPolicy> report = std::nullopt);
Verdict is_compatible(const MatrixDiffOperator& k1, const MatrixDiffOperator& k2,
                      const std::string& subject = "K1, K2", std::optional<TruncationPolicy> report = std::nullopt);

} // namespace drham
