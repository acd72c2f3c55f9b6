#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "matern/kernel.hpp"

using matern::kernel_poly_coeffs;
using matern::matern_correlation;

namespace {

// Ulp-scale agreement for values near 1.
bool close_ulp(double x, double y, double ulps) {
    return std::abs(x - y) <= ulps * 2.22e-16 * std::max(std::abs(x), std::abs(y));
}

}  // namespace

TEST_CASE("K(0) is exactly 1 for every order") {
    for (int p = 0; p <= 16; ++p) {
        for (double theta : {1e-6, 0.1, 1.0, 42.0, 1e6}) {
            CAPTURE(p);
            CAPTURE(theta);
            CHECK(matern_correlation(p, theta, 0.0) == 1.0);
        }
    }
}

TEST_CASE("constant coefficient is exactly 1") {
    for (int p = 0; p <= 16; ++p) {
        CHECK(kernel_poly_coeffs(p)[0] == 1.0);
    }
}

TEST_CASE("low-order forms match their textbook displays") {
    // p = 0: e^{-sr}; p = 1: (1 + sr) e^{-sr}; p = 2: (1 + sr + (sr)^2/3) e^{-sr}.
    for (double theta : {0.3, 1.0, 5.0}) {
        for (double r = 0.05; r <= 2.0; r += 0.13) {
            CAPTURE(theta);
            CAPTURE(r);
            const double s0 = std::sqrt(theta) * r;
            CHECK(close_ulp(matern_correlation(0, theta, r), std::exp(-s0), 4));
            const double s1 = std::sqrt(3.0 * theta) * r;
            CHECK(close_ulp(matern_correlation(1, theta, r), (1.0 + s1) * std::exp(-s1), 4));
            const double s2 = std::sqrt(5.0 * theta) * r;
            CHECK(close_ulp(matern_correlation(2, theta, r),
                            (1.0 + s2 + s2 * s2 / 3.0) * std::exp(-s2), 4));
        }
    }
}

TEST_CASE("p = 2 coefficients are exactly [1, 1, 1/3]") {
    const auto& c = kernel_poly_coeffs(2);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == 1.0);
    CHECK(c[2] == 1.0 / 3.0);
}

TEST_CASE("correlation is positive, bounded by 1, and decreasing in r") {
    for (int p = 0; p <= 8; ++p) {
        for (double theta : {0.01, 1.0, 100.0}) {
            CAPTURE(p);
            CAPTURE(theta);
            double prev = 1.0;
            for (double r = 0.0; r <= 2.0001; r += 0.02) {
                const double k = matern_correlation(p, theta, r);
                CHECK(k > 0.0);
                CHECK(k <= 1.0);
                CHECK(k <= prev + 1e-16);
                prev = k;
            }
        }
    }
}

TEST_CASE("underflow guard returns exact zero instead of inf * 0") {
    const double k = matern_correlation(3, 1e300, 1.0);
    CHECK(k == 0.0);
    CHECK(std::isfinite(matern_correlation(16, 1e300, 2.0)));
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(matern_correlation(-1, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(matern_correlation(17, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(matern_correlation(1, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(matern_correlation(1, -2.0, 0.5), std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(matern_correlation(1, nan, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(matern_correlation(1, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(matern_correlation(1, 1.0, nan), std::invalid_argument);
}
