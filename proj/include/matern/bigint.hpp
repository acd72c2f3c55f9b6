#ifndef MATERN_BIGINT_HPP
#define MATERN_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

namespace matern {

// Exact arithmetic used for every coefficient table. Floating conversion
// happens once per order, in the evaluators.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// n!! with the empty-product conventions 0!! = (-1)!! = 1.
inline BigInt big_double_factorial(int n) {
    BigInt r = 1;
    for (int i = n; i > 1; i -= 2) r *= i;
    return r;
}

inline BigInt big_pow2(int n) { return BigInt(1) << n; }

}  // namespace matern

#endif  // MATERN_BIGINT_HPP
