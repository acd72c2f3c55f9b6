#include "matern/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "matern/coefficients.hpp"
#include "matern/order.hpp"
#include "matern/oracle.hpp"
#include "matern/product_integral.hpp"
#include "matern/rng.hpp"
#include "matern/single_integral.hpp"

namespace matern {

namespace {

double rel_diff(double x, double y) {
    const double denom = std::max({std::abs(x), std::abs(y), 1e-300});
    return std::abs(x - y) / denom;
}

// Distance in representable doubles, via the usual order-preserving
// bit-pattern mapping. NaN maps far from every number, which is what the
// callers want.
std::uint64_t ulp_distance(double x, double y) {
    const auto key = [](double v) {
        std::uint64_t u = 0;
        std::memcpy(&u, &v, sizeof u);
        return (u & 0x8000000000000000ULL) ? ~u : (u | 0x8000000000000000ULL);
    };
    const std::uint64_t kx = key(x);
    const std::uint64_t ky = key(y);
    return kx > ky ? kx - ky : ky - kx;
}

SweepCell sweep_cell(int p, double theta, int grid_n, int nodes_per_panel) {
    SweepCell cell;
    cell.p = p;
    cell.theta = theta;
    std::vector<double> grid(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        grid[i] = -1.0 + 2.0 * i / (grid_n - 1);
    }
    for (int i = 0; i < grid_n; ++i) {
        const double a = grid[i];
        const double rel = rel_diff(single_integral(p, theta, a),
                                    quad_single(p, theta, a, nodes_per_panel));
        if (rel > cell.max_rel_single) {
            cell.max_rel_single = rel;
            cell.worst_single_a = a;
        }
        for (int j = i; j < grid_n; ++j) {
            const double b = grid[j];
            const double relp = rel_diff(product_integral(p, theta, a, b),
                                         quad_product(p, theta, a, b, nodes_per_panel));
            if (relp > cell.max_rel_product) {
                cell.max_rel_product = relp;
                cell.worst_product_a = a;
                cell.worst_product_b = b;
            }
        }
    }
    return cell;
}

}  // namespace

SweepReport run_sweep(int p_max, const std::vector<double>& thetas, int grid_n,
                      int nodes_per_panel, bool parallel) {
    validate_order(p_max);
    for (double t : thetas) validate_theta(t);
    if (thetas.empty()) throw std::invalid_argument("sweep needs at least one theta");
    if (grid_n < 2) throw std::invalid_argument("sweep grid needs at least two points");
    if (nodes_per_panel < 2) {
        throw std::invalid_argument("nodes_per_panel must be at least 2");
    }

    struct Job {
        int p;
        double theta;
    };
    std::vector<Job> jobs;
    for (int p = 0; p <= p_max; ++p) {
        for (double t : thetas) jobs.push_back({p, t});
    }

    SweepReport report;
    report.cells.resize(jobs.size());
    const auto total = static_cast<std::int64_t>(jobs.size());
#ifdef MATERN_HAS_OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < total; ++i) {
            report.cells[i] = sweep_cell(jobs[i].p, jobs[i].theta, grid_n, nodes_per_panel);
        }
    } else {
        for (std::int64_t i = 0; i < total; ++i) {
            report.cells[i] = sweep_cell(jobs[i].p, jobs[i].theta, grid_n, nodes_per_panel);
        }
    }
#else
    (void)parallel;
    for (std::int64_t i = 0; i < total; ++i) {
        report.cells[i] = sweep_cell(jobs[i].p, jobs[i].theta, grid_n, nodes_per_panel);
    }
#endif

    for (const SweepCell& cell : report.cells) {
        report.max_rel_single = std::max(report.max_rel_single, cell.max_rel_single);
        report.max_rel_product = std::max(report.max_rel_product, cell.max_rel_product);
    }
    return report;
}

PropertyReport run_property_suite(int n_cases, std::uint64_t seed) {
    if (n_cases < 1) throw std::invalid_argument("need at least one property case");
    PropertyReport report;
    report.cases = n_cases;
    Xoshiro256pp rng(seed);

    const auto record = [&](const char* property, int p, double theta, double a,
                            double b, double lhs, double rhs) {
        report.violations.push_back({property, p, theta, a, b, lhs, rhs});
    };

    for (int c = 0; c < n_cases; ++c) {
        const int p = static_cast<int>(rng.next() % 7);
        const double theta = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
        const double a = rng.uniform_pm1();
        const double b = rng.uniform_pm1();

        const double ia = single_integral(p, theta, a);
        const double ia_neg = single_integral(p, theta, -a);
        if (ulp_distance(ia, ia_neg) > 2) {
            record("single-reflection", p, theta, a, -a, ia, ia_neg);
        }
        if (!(ia > 0.0 && ia <= 1.0)) {
            record("single-range", p, theta, a, 0.0, ia, 0.0);
        }

        const double jab = product_integral(p, theta, a, b);
        const double jba = product_integral(p, theta, b, a);
        const double jrr = product_integral(p, theta, -b, -a);
        if (jab != jba) {
            record("product-swap", p, theta, a, b, jab, jba);
        }
        if (ulp_distance(jab, jrr) > 4) {
            record("product-reflection", p, theta, a, b, jab, jrr);
        }
        if (!(jab > 0.0 && jab <= 1.0)) {
            record("product-range", p, theta, a, b, jab, 0.0);
        }

        const double jaa = product_integral(p, theta, a, a);
        const double jbb = product_integral(p, theta, b, b);
        if (jab * jab > jaa * jbb * (1.0 + 1e-12)) {
            record("product-inner-product", p, theta, a, b, jab * jab, jaa * jbb);
        }

        const double i_limit = single_integral(p, 1e-8, a);
        if (std::abs(i_limit - 1.0) > 1e-3) {
            record("single-unit-limit", p, 1e-8, a, 0.0, i_limit, 1.0);
        }
        const double j_limit = product_integral(p, 1e-8, a, b);
        if (std::abs(j_limit - 1.0) > 1e-3) {
            record("product-unit-limit", p, 1e-8, a, b, j_limit, 1.0);
        }
    }
    return report;
}

BesselCheckReport check_bessel_conjecture(int p_max) {
    if (p_max < 1) throw std::invalid_argument("bessel check needs p_max >= 1");
    validate_order(p_max);
    BesselCheckReport report;
    const auto& references = bessel_reference_rows();
    for (int p = 1; p <= p_max; ++p) {
        BesselCheckRow row;
        row.p = p;
        row.row = bessel_row(p);
        row.self_consistent = (row.row == normalized_distance_row(p));
        if (p <= static_cast<int>(references.size())) {
            row.fixture_checked = true;
            const auto& ref = references[p - 1];
            row.fixture_match = (row.row.size() == ref.size());
            if (row.fixture_match) {
                // Published rows are written highest degree first.
                for (std::size_t i = 0; i < ref.size(); ++i) {
                    if (row.row[row.row.size() - 1 - i] != BigInt(ref[i])) {
                        row.fixture_match = false;
                        break;
                    }
                }
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace matern
