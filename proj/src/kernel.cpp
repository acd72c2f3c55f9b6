#include "matern/kernel.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "matern/coefficients.hpp"
#include "matern/order.hpp"

namespace matern {

namespace {

std::vector<double> build_kernel_coeffs(int p) {
    // (p!/(2p)!) ((2p-j)!/((p-j)! j!)) 2^j = b_j 2^p / (j! (2p)!/p!), exact
    // rationals converted once. The j = 0 coefficient is exactly 1.
    const CoefficientSet cs = make_coefficients(p);
    const BigInt norm = big_factorial(2 * p) / big_factorial(p);
    std::vector<double> out(p + 1);
    for (int j = 0; j <= p; ++j) {
        const BigRat q(cs.b[j] * big_pow2(p), big_factorial(j) * norm);
        out[j] = q.convert_to<double>();
    }
    return out;
}

}  // namespace

const std::vector<double>& kernel_poly_coeffs(int p) {
    validate_order(p);
    static std::mutex mu;
    static std::map<int, std::unique_ptr<const std::vector<double>>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[p];
    if (!slot) slot = std::make_unique<const std::vector<double>>(build_kernel_coeffs(p));
    return *slot;
}

double matern_correlation(int p, double theta, double r) {
    validate_theta(theta);
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("radial distance must be nonnegative and finite");
    }
    const std::vector<double>& coeff = kernel_poly_coeffs(p);
    const double s = std::sqrt((2.0 * p + 1.0) * theta);
    const double u = s * r;
    if (u > 745.0) return 0.0;  // e^{-u} underflows; the polynomial cannot rescue it
    double poly = coeff[p];
    for (int j = p - 1; j >= 0; --j) poly = poly * u + coeff[j];
    return poly * std::exp(-u);
}

}  // namespace matern
