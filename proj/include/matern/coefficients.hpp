#ifndef MATERN_COEFFICIENTS_HPP
#define MATERN_COEFFICIENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "matern/bigint.hpp"

namespace matern {

// Exact coefficient tables for one smoothness order p (nu = p + 1/2).
//
//   a0(p)  = 2^p p!
//   b_j(p) = (2p-j)! 2^j / ((p-j)! 2^p)          for 0 <= j <= p
//   c_k(p) = (a0 - sum_{j<=k} b_j) / (k+1)!      for 0 <= k <= p-1
//
// All divisions are exact; construction verifies that. The b row feeds the
// kernel, the (a0, c) row feeds the single-interval integral, and
// prefactor_denominator = 2 (2p-1)!! is that integral's leading divisor.
struct CoefficientSet {
    int p = 0;
    BigInt a0;
    std::vector<BigInt> b;  // size p+1
    std::vector<BigInt> c;  // size p
    BigInt prefactor_denominator;
};

CoefficientSet make_coefficients(int p);

// Report from an exhaustive exact identity check; `failures` lists every
// order at which the two sides differ (expected empty).
struct IdentityReport {
    std::string identity;
    int p_max = 0;
    std::vector<int> failures;
    [[nodiscard]] bool ok() const { return failures.empty(); }
};

// (2p)!/p! == (2p-1)!! 2^p for 0 <= p <= p_max.
IdentityReport verify_double_factorial_identity(int p_max);

// sum_{j=0}^{p} ((2p-j)!/(p-j)!) 2^j == 4^p p! for 0 <= p <= p_max.
IdentityReport verify_companion_binomial_identity(int p_max);

// Order-of-summation identity over triangular index sets:
//   sum_{j=0}^{p} f(j) sum_{m=0}^{j} g(m) == sum_{m=0}^{p} g(m) sum_{j=m}^{p} f(j)
// checked in exact rational arithmetic on `trials` pseudo-random sequences
// with orders up to p_max. Returns the number of failures (expected 0).
int verify_summation_swap_identity(int p_max, int trials, std::uint64_t seed);

// Integer coefficient row of the distance-exponential polynomial of the
// product integral, normalized to leading coefficient 1 in the half-scale
// variable B' = B/2. Computed here by direct per-power accumulation over the
// (j,k,l) triple sum, independently of the product module's polynomial
// consolidation; the two routes are compared in tests and in `bessel-check`.
// For p = 1 this is [15, 15, 6, 1].
std::vector<BigInt> bessel_row(int p);

// Published reference rows (ascending degree is the reverse of these), for
// p = 1..4. bessel_row(p) reversed must equal kBesselReferenceRows[p-1].
const std::vector<std::vector<std::int64_t>>& bessel_reference_rows();

}  // namespace matern

#endif  // MATERN_COEFFICIENTS_HPP
