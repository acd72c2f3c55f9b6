#ifndef MATERN_SINGLE_INTEGRAL_HPP
#define MATERN_SINGLE_INTEGRAL_HPP

#include <vector>

#include "matern/bigint.hpp"
#include "matern/integral_result.hpp"

namespace matern {

struct Design;  // imspe.hpp

// Closed form of I(a) = (1/2) \int_{-1}^{1} K(|a-x|) dx:
//
//   I = 1/(2 (2p-1)!! s) * sum_{sigma in {+a,-a}}
//         { a0 - [a0 + sum_{k=0}^{p-1} c_k u^{k+1}] e^{-u} },   u = s (1+sigma)
//
// with s = sqrt((2p+1) theta) and the exact (a0, c) tables. The two branches
// make I(a) == I(-a) hold exactly in floating point (the same two addends in
// either order). For theta < 1e-12 the closed form returns the limit 1.0 and
// flags it: the prefactor 1/s and the brace vanish together and direct
// evaluation has no significant digits left.
IntegralResult single_integral_ex(int p, double theta, double a);
double single_integral(int p, double theta, double a);

// Exact integer description of the closed form for one order: the bracket
// polynomial a0 + c0 u + c1 u^2 + ... (coefficients ascending, the constant
// duplicated as poly[0]), and the prefactor denominator 2 (2p-1)!!.
struct SingleIntegralForm {
    int p = 0;
    BigInt constant;            // a0
    std::vector<BigInt> poly;   // [a0, c0, ..., c_{p-1}]
    BigInt prefactor_denominator;
};
SingleIntegralForm single_integral_form(int p);

// Element (i,k) = single_integral(p, theta[k], design.points(i,k)).
std::vector<std::vector<double>> single_integral_vector(int p,
                                                        const std::vector<double>& theta,
                                                        const Design& design);

}  // namespace matern

#endif  // MATERN_SINGLE_INTEGRAL_HPP
