#ifndef MATERN_KERNEL_HPP
#define MATERN_KERNEL_HPP

#include <vector>

namespace matern {

// Matern correlation for half-integer smoothness nu = p + 1/2:
//
//   K(r) = (p!/(2p)!) sum_{j=0}^{p} ((2p-j)!/((p-j)! j!)) 2^j (s r)^j e^{-s r}
//
// with s = sqrt((2p+1) theta) and theta = 1/l^2. The polynomial coefficients
// are exact integers scaled so the constant term is exactly 1, which makes
// K(0) == 1 without rounding.
double matern_correlation(int p, double theta, double r);

// The cached per-order float coefficients (ascending powers of s*r), exposed
// so tests can compare against the exact tables. coeffs[0] == 1.0.
const std::vector<double>& kernel_poly_coeffs(int p);

}  // namespace matern

#endif  // MATERN_KERNEL_HPP
