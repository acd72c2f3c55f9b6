#ifndef MATERN_PRODUCT_INTEGRAL_HPP
#define MATERN_PRODUCT_INTEGRAL_HPP

#include <vector>

#include "matern/bigint.hpp"
#include "matern/integral_result.hpp"

namespace matern {

struct Design;  // imspe.hpp

// Closed form of J(a,b) = (1/2) \int_{-1}^{1} K(|a-x|) K(|b-x|) dx for two
// identical-order kernels, with arguments ordered internally so b >= a.
//
// Scaled variables (s = sqrt((2p+1) theta)):
//   A+ = 2s(1+a),  A- = 2s(1-a),  B = 2s(b-a)
// Exponential groups:
//   E_delta = e^{-s(b-a)},  E+ = e^{-s(2+a+b)},  E- = e^{-s(2-a-b)}
//
// Direct (reference) form, derived by splitting the integral at the kinks
// x = a and x = b and integrating each region's polynomial-times-exponential
// elementarily:
//
//   J = (1/s) [p!/(2p)!]^2 sum_{j,k=0}^{p} sum_{l=0}^{k} w_{jkl} *
//       ( { B^l + (-1)^l B^l T(B,m) + (-1)^{k+l} B^{j+k+1}/(m+1)! } E_delta
//         - B^l T(A+,m) E+
//         - (-1)^l B^l T(A-,m) E- )
//
// with m = j+k-l, T(x,n) = sum_{t=0}^{n} x^t/t! the truncated exponential,
// and w_{jkl} = (2p-j)!(2p-k)!m! / (4 (p-j)! j! (p-k)! l! (k-l)!).
//
// Two structural points that docs/formula_notes.md derives in full, because
// both are easy to get wrong and either one breaks the quadrature cross-check:
//   * the standalone B^l in the E_delta brace comes from the unit value of
//     the first region's antiderivative at its lower limit; and
//   * the E- group enters with MINUS (-1)^l (the same sign that the p = 0
//     special case J = (1/(4s))[(2+B)E_delta - E+ - E-] shows directly, and
//     the only sign for which J(a,b) == J(-b,-a)).
//
// The consolidated (default) path pre-sums the triple sum into three
// polynomial brackets, so J = [Pd(B) E_delta - Pp(A+,B) E+ - Pm(A-,B) E-]
// / (scale * s) with Pm(A,B) == Pp(A,-B).
IntegralResult product_integral_ex(int p, double theta, double a, double b);
double product_integral(int p, double theta, double a, double b);

// Reference evaluation by the raw triple sum; agrees with the consolidated
// path to <= 1e-13 relative (tested).
IntegralResult product_integral_direct_ex(int p, double theta, double a, double b);
double product_integral_direct(int p, double theta, double a, double b);

// One term of the triple sum, with its exact rational weight.
struct ProductTerm {
    int j = 0, k = 0, l = 0, m = 0;  // m = j + k - l
    BigRat weight;                   // w_{jkl}
};

// All (j,k,l) terms for one order plus the global prefactor [p!/(2p)!]^2.
struct ProductTermTable {
    int p = 0;
    std::vector<ProductTerm> terms;  // sum_k (k+1) * (p+1) entries
    BigRat prefactor;                // [p!/(2p)!]^2
};
const ProductTermTable& product_term_table(int p);

// Exact consolidated brackets, scaled by scale = 4 ((2p)!/p!)^2 so that the
// low orders reproduce small-integer tables (p=1: scale 16, e_delta
// [20, 10, 2, 1/6]; p=2: scale 576).
//   e_delta[i]    : coefficient of B^i, degree 2p+1
//   e_plus[l][t]  : coefficient of B^l A+^t, l <= p, t <= 2p
//   e_minus[l][t] : coefficient of B^l A-^t  (equals (-1)^l e_plus[l][t])
// J = (e_delta(B) E_delta - e_plus(A+,B) E+ - e_minus(A-,B) E-) / (scale * s).
struct ConsolidatedBrackets {
    int p = 0;
    BigInt scale;
    std::vector<BigRat> e_delta;
    std::vector<std::vector<BigRat>> e_plus;
    std::vector<std::vector<BigRat>> e_minus;
};
const ConsolidatedBrackets& product_integral_consolidated_coeffs(int p);

// e_delta normalized to an integer vector with leading coefficient 1 in the
// half-scale variable B' = B/2 (coefficient i multiplied by 2^i, then divided
// by the top coefficient). Same convention as coefficients.hpp bessel_row,
// which computes it by an independent route.
std::vector<BigInt> normalized_distance_row(int p);

// R[i][j] = prod_k J(p, theta[k], (x_{i,k}, x_{j,k})); symmetric by
// construction. `parallel` enables the OpenMP path (bit-identical results).
std::vector<std::vector<double>> product_integral_matrix(int p,
                                                         const std::vector<double>& theta,
                                                         const Design& design,
                                                         bool parallel = false);

}  // namespace matern

#endif  // MATERN_PRODUCT_INTEGRAL_HPP
