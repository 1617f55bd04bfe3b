#pragma once

// Local functionals (densities modulo constants and total x-derivatives), variational
// derivatives, the grading operator D, the Euler-type operator E-hat and (D - 2)^{-1}.

#include <optional>
#include <string>
#include <vector>

#include "drham/ring.hpp"

namespace drham {

class LocalFunctional {
public:
    LocalFunctional() = default;
    /// The constant term of the density is removed on construction.
    explicit LocalFunctional(DiffPoly density, std::string label = {});

    const DiffPoly& density() const { return density_; }
    const std::string& label() const { return label_; }
    const TruncationPolicy& truncation() const { return density_.truncation(); }

    friend LocalFunctional operator+(const LocalFunctional& a, const LocalFunctional& b);
    friend LocalFunctional operator-(const LocalFunctional& a, const LocalFunctional& b);
    friend LocalFunctional operator*(const Rational& c, const LocalFunctional& a);

private:
    DiffPoly density_;
    std::string label_;
};

struct HomogeneityData {
    std::vector<Rational> q;
    Rational delta = 0;
    std::vector<Rational> r;

    Rational mu(int alpha) const { return q.at(alpha) - delta / 2; }
    std::vector<Rational> mu() const;
};

/// delta f / delta u^alpha = sum_d (-dx)^d df/du^alpha_d.
DiffPoly var_derivative(const DiffPoly& density, int alpha);
DiffPoly var_derivative(const LocalFunctional& h, int alpha);
/// All n variational derivatives.
std::vector<DiffPoly> var_gradient(const LocalFunctional& h, int n);

/// True iff every variational derivative of a - b vanishes and a - b is zero at the origin.
bool equals(const LocalFunctional& a, const LocalFunctional& b);

LocalFunctional d_operator(const LocalFunctional& h);
/// The unique g with (D - 2) g = h. Linear terms u^a_n with n >= 1 are total
/// derivatives and are dropped first; a remaining monomial with D-eigenvalue 2
/// raises KernelObstruction.
LocalFunctional solve_d_minus_2(const LocalFunctional& h);

DiffPoly e_hat(const DiffPoly& f, const HomogeneityData& hom);

/// Some g with dx(g) = f, found by a linear solve over the monomials that can
/// map onto f. Empty if f is not a total derivative.
std::optional<DiffPoly> antiderivative(const DiffPoly& f);

} // namespace drham
