// Timing comparison between the serial reference path and the OpenMP path
// for the three parallelizable stages: product-matrix assembly, the
// validation sweep, and Monte-Carlo IMSPE. Also asserts that parallel and
// serial results are bit-identical, which is the whole point of the
// fixed-slot / fixed-block design.

#include <chrono>
#include <cstdio>
#include <vector>

#include "matern/imspe.hpp"
#include "matern/oracle.hpp"
#include "matern/product_integral.hpp"
#include "matern/rng.hpp"
#include "matern/validate.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

matern::Design random_design(int n, int d, std::uint64_t seed) {
    matern::Design design;
    design.points.resize(n, d);
    matern::Xoshiro256pp rng(seed);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) design.points(i, k) = rng.uniform_pm1();
    }
    return design;
}

void report(const char* label, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n",
                label, serial_s, parallel_s, serial_s / parallel_s,
                identical ? "bitwise-identical" : "RESULTS DIFFER");
}

}  // namespace

int main() {
    bool all_identical = true;

    {
        const matern::Design design = random_design(400, 3, 1);
        const std::vector<double> theta{1.0, 0.7, 1.3};
        auto t0 = std::chrono::steady_clock::now();
        const auto serial = matern::product_integral_matrix(3, theta, design, false);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const auto parallel = matern::product_integral_matrix(3, theta, design, true);
        const double tp = seconds_since(t0);
        const bool same = serial == parallel;
        all_identical = all_identical && same;
        report("product matrix 400x3", ts, tp, same);
    }

    {
        const std::vector<double> thetas{1e-2, 1.0, 1e2};
        auto t0 = std::chrono::steady_clock::now();
        const auto serial = matern::run_sweep(4, thetas, 11, 64, false);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const auto parallel = matern::run_sweep(4, thetas, 11, 64, true);
        const double tp = seconds_since(t0);
        bool same = serial.max_rel_single == parallel.max_rel_single &&
                    serial.max_rel_product == parallel.max_rel_product;
        for (std::size_t i = 0; same && i < serial.cells.size(); ++i) {
            same = serial.cells[i].max_rel_single == parallel.cells[i].max_rel_single &&
                   serial.cells[i].max_rel_product == parallel.cells[i].max_rel_product;
        }
        all_identical = all_identical && same;
        report("oracle sweep p<=4", ts, tp, same);
    }

    {
        const matern::Design design = random_design(40, 2, 2);
        const std::vector<double> theta{1.0, 0.5};
        auto t0 = std::chrono::steady_clock::now();
        const auto serial = matern::mc_imspe(2, theta, design, 200000, 7, false);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const auto parallel = matern::mc_imspe(2, theta, design, 200000, 7, true);
        const double tp = seconds_since(t0);
        const bool same = serial.mean == parallel.mean &&
                          serial.standard_error == parallel.standard_error;
        all_identical = all_identical && same;
        report("mc imspe 40x2 200k", ts, tp, same);
    }

    return all_identical ? 0 : 1;
}
