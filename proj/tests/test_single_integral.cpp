#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "matern/oracle.hpp"
#include "matern/single_integral.hpp"

using matern::BigInt;
using matern::quad_single;
using matern::single_integral;
using matern::single_integral_ex;
using matern::single_integral_form;

namespace {

std::vector<BigInt> big(std::initializer_list<long long> values) {
    std::vector<BigInt> out;
    for (long long v : values) out.emplace_back(v);
    return out;
}

double rel(double x, double y) {
    return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300});
}

}  // namespace

TEST_CASE("exact bracket polynomials for p = 1..4") {
    struct Fixture {
        int p;
        long long constant;
        std::vector<BigInt> poly;
        long long denom;
    };
    const std::vector<Fixture> fixtures = {
        {1, 2, big({2, 1}), 2},
        {2, 8, big({8, 5, 1}), 6},
        {3, 48, big({48, 33, 9, 1}), 30},
        {4, 384, big({384, 279, 87, 14, 1}), 210},
    };
    for (const Fixture& f : fixtures) {
        CAPTURE(f.p);
        const auto form = single_integral_form(f.p);
        CHECK(form.p == f.p);
        CHECK(form.constant == BigInt(f.constant));
        CHECK(form.poly == f.poly);
        CHECK(form.prefactor_denominator == BigInt(f.denom));
    }
}

TEST_CASE("reflection symmetry is exact in floating point") {
    for (int p = 0; p <= 8; ++p) {
        for (double theta : {1e-3, 0.7, 13.0, 1e3}) {
            for (double a = 0.0; a <= 1.0; a += 0.0625) {
                CAPTURE(p);
                CAPTURE(theta);
                CAPTURE(a);
                CHECK(single_integral(p, theta, a) == single_integral(p, theta, -a));
            }
        }
    }
}

TEST_CASE("closed form agrees with the quadrature oracle") {
    for (int p = 0; p <= 8; ++p) {
        for (double theta : {1e-3, 1e-1, 1.0, 1e1, 1e3}) {
            for (double a = -1.0; a <= 1.0001; a += 0.25) {
                CAPTURE(p);
                CAPTURE(theta);
                CAPTURE(a);
                const double closed = single_integral(p, theta, a);
                const double oracle = quad_single(p, theta, a, 128);
                CHECK(rel(closed, oracle) <= 1e-9);
            }
        }
    }
}

TEST_CASE("p = 0 closed form against the hand-integrated exponential") {
    // (1/2) int e^{-s|a-x|} dx = (2 - e^{-s(1+a)} - e^{-s(1-a)}) / (2s).
    for (double theta : {0.2, 1.0, 9.0}) {
        for (double a : {-1.0, -0.4, 0.0, 0.7, 1.0}) {
            const double s = std::sqrt(theta);
            const double hand =
                (2.0 - std::exp(-s * (1.0 + a)) - std::exp(-s * (1.0 - a))) / (2.0 * s);
            CHECK(rel(single_integral(0, theta, a), hand) <= 1e-15);
        }
    }
}

TEST_CASE("small-theta limit returns 1 with the flag set") {
    const auto res = single_integral_ex(3, 1e-13, 0.4);
    CHECK(res.value == 1.0);
    CHECK(res.limit_case);
    CHECK(res.method == matern::EvalMethod::closed_single);

    // Just above the floor the value is continuous with the limit.
    const auto near = single_integral_ex(3, 2e-12, 0.4);
    CHECK(!near.limit_case);
    CHECK(std::abs(near.value - 1.0) < 1e-5);
}

TEST_CASE("boundary points are ordinary evaluations") {
    for (int p = 0; p <= 6; ++p) {
        for (double theta : {0.5, 50.0}) {
            const double at_edge = single_integral(p, theta, 1.0);
            CHECK(at_edge > 0.0);
            CHECK(at_edge <= 1.0);
            CHECK(at_edge == single_integral(p, theta, -1.0));
            // The edge average is smaller: half the mass sits beyond reach.
            CHECK(at_edge < single_integral(p, theta, 0.0));
        }
    }
}

TEST_CASE("monotone in theta: rougher processes average lower") {
    for (int p = 0; p <= 6; ++p) {
        for (double a : {0.0, 0.5}) {
            double prev = 1.0;
            for (double theta : {1e-6, 1e-3, 1e-1, 1.0, 1e1, 1e3}) {
                const double value = single_integral(p, theta, a);
                CHECK(value <= prev + 1e-15);
                prev = value;
            }
        }
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(single_integral(-1, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(single_integral(17, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(single_integral(1, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(single_integral(1, 1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(single_integral(1, 1.0, std::nan("")), std::invalid_argument);
}
