#pragma once

// Seeded random instances for the property suites on rational Miura transformations,
// shared by the tests, the acceptance runner and `drham check --seed`.

#include <cstdint>
#include <random>
#include <vector>

#include "drham/diffop.hpp"
#include "drham/rational.hpp"
#include "drham/verdict.hpp"

namespace drham {

/// Every draw goes through engine() % n so that a seed fixes the data on every platform.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    /// Nonzero p/q with |p| <= range, 1 <= q <= 3.
    Rational coeff(int range);

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Purely singular transformation of n fields: each correction is a short sum of
/// eps^k P / (v^1_x)^j with P of differential degree k + j, free of v^1_0 and v^1_x.
RationalMiura random_singular(SampleRng& rng, int n, TruncationPolicy policy);

/// g^{ab} Dx + b^{ab}_c v^c_x with g affine in v^1, b_c free of v^1 and b_1 constant.
MatrixDiffOperator random_hydrodynamic(SampleRng& rng, int n, TruncationPolicy policy);

/// Compositions and inverses of random purely singular transformations stay purely
/// singular; instances are spread over genus caps 1 and 2.
std::vector<Verdict> singular_subgroup_suite(std::uint64_t seed, int instances);

/// The closed formula for the pol part of a transported operator against the direct
/// Laurent computation.
std::vector<Verdict> lemma_s2_suite(std::uint64_t seed, int instances);

} // namespace drham
