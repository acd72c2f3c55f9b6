#include "matern/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <Eigen/Dense>

#include "matern/imspe.hpp"
#include "matern/kernel.hpp"
#include "matern/order.hpp"
#include "matern/rng.hpp"
#include "matern/summation.hpp"

namespace matern {

namespace {

constexpr double kPi = 3.14159265358979323846;

GaussLegendreRule build_gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on the three-term recurrence.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            deriv = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / deriv;
            x -= dx;
            if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        if (n % 2 == 1 && i == half - 1) x = 0.0;  // middle root is exact
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double panel_sum(const GaussLegendreRule& rule, double lo, double hi,
                 const std::function<double(double)>& f) {
    const double center = 0.5 * (lo + hi);
    const double halfwidth = 0.5 * (hi - lo);
    StableSum acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc.add(rule.weights[i] * f(center + halfwidth * rule.nodes[i]));
    }
    return halfwidth * acc.total();
}

double integrate(const QuadratureSpec& spec, const std::function<double(double)>& f) {
    if (spec.nodes_per_panel < 2) {
        throw std::invalid_argument("nodes_per_panel must be at least 2");
    }
    if (spec.panel_boundaries.size() < 2) {
        throw std::invalid_argument("quadrature spec needs at least one panel");
    }
    const GaussLegendreRule& rule = gauss_legendre(spec.nodes_per_panel);
    StableSum acc;
    for (std::size_t i = 0; i + 1 < spec.panel_boundaries.size(); ++i) {
        acc.add(panel_sum(rule, spec.panel_boundaries[i], spec.panel_boundaries[i + 1], f));
    }
    return acc.total();
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<const GaussLegendreRule>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<const GaussLegendreRule>(build_gauss_legendre(n));
    return *slot;
}

QuadratureSpec make_quadrature_spec(const std::vector<double>& kinks,
                                    double decay_scale, int nodes_per_panel) {
    if (nodes_per_panel < 2) {
        throw std::invalid_argument("nodes_per_panel must be at least 2");
    }
    std::vector<double> cuts{-1.0, 1.0};
    for (double k : kinks) {
        if (k > -1.0 && k < 1.0) cuts.push_back(k);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return y - x < 1e-12; }),
               cuts.end());
    if (cuts.back() < 1.0) cuts.back() = 1.0;  // unique() may have merged into a kink

    // Width cap so e^{-s x} variation per panel stays resolvable at the
    // default node count.
    double max_width = 2.0;
    if (decay_scale > 0.0) max_width = std::min(max_width, 40.0 / decay_scale);

    QuadratureSpec spec;
    spec.nodes_per_panel = nodes_per_panel;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        spec.panel_boundaries.push_back(lo);
        const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
        for (int piece = 1; piece < pieces; ++piece) {
            spec.panel_boundaries.push_back(lo + (hi - lo) * piece / pieces);
        }
    }
    spec.panel_boundaries.push_back(cuts.back());
    return spec;
}

double quad_single(int p, double theta, double a, const QuadratureSpec& spec) {
    validate_order(p);
    validate_theta(theta);
    validate_coordinate(a, "a");
    const double total = integrate(spec, [&](double x) {
        return matern_correlation(p, theta, std::abs(a - x));
    });
    return 0.5 * total;
}

double quad_single(int p, double theta, double a, int nodes_per_panel) {
    const double s = std::sqrt((2.0 * p + 1.0) * theta);
    return quad_single(p, theta, a, make_quadrature_spec({a}, s, nodes_per_panel));
}

double quad_product(int p, double theta, double a, double b, const QuadratureSpec& spec) {
    validate_order(p);
    validate_theta(theta);
    validate_coordinate(a, "a");
    validate_coordinate(b, "b");
    const double total = integrate(spec, [&](double x) {
        return matern_correlation(p, theta, std::abs(a - x)) *
               matern_correlation(p, theta, std::abs(b - x));
    });
    return 0.5 * total;
}

double quad_product(int p, double theta, double a, double b, int nodes_per_panel) {
    const double s = std::sqrt((2.0 * p + 1.0) * theta);
    return quad_product(p, theta, a, b, make_quadrature_spec({a, b}, s, nodes_per_panel));
}

McResult mc_imspe(int p, const std::vector<double>& theta, const Design& design,
                  std::uint64_t n_samples, std::uint64_t seed, bool parallel) {
    validate_order(p);
    for (double t : theta) validate_theta(t);
    const int n = design.n();
    const int d = design.d();
    if (n < 1) throw std::invalid_argument("design must contain at least one point");
    if (static_cast<int>(theta.size()) != d) {
        throw std::invalid_argument("theta count does not match design dimension");
    }
    if (n_samples < 2) throw std::invalid_argument("need at least two samples");
    if (d > 8) throw std::invalid_argument("Monte-Carlo oracle supports at most 8 dimensions");

    Eigen::MatrixXd C(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double prod = 1.0;
            for (int k = 0; k < d; ++k) {
                prod *= matern_correlation(p, theta[k],
                                           std::abs(design.points(i, k) - design.points(j, k)));
            }
            C(i, j) = prod;
        }
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success) {
        throw IllConditionedError("correlation matrix is not positive definite", 0.0);
    }

    // Fixed-size blocks, each with its own counter-derived stream; the block
    // sums are reduced in block order afterwards, so thread count cannot
    // change the result.
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t n_blocks = (n_samples + kBlock - 1) / kBlock;
    std::vector<double> block_sum(n_blocks, 0.0);
    std::vector<double> block_sumsq(n_blocks, 0.0);

    const auto run_block = [&](std::uint64_t b) {
        Xoshiro256pp rng = block_rng(seed, b);
        const std::uint64_t lo = b * kBlock;
        const std::uint64_t hi = std::min(n_samples, lo + kBlock);
        Eigen::VectorXd kvec(n);
        double sum = 0.0;
        double sumsq = 0.0;
        for (std::uint64_t smp = lo; smp < hi; ++smp) {
            double x[8];
            for (int k = 0; k < d; ++k) x[k] = rng.uniform_pm1();
            for (int i = 0; i < n; ++i) {
                double prod = 1.0;
                for (int k = 0; k < d; ++k) {
                    prod *= matern_correlation(p, theta[k],
                                               std::abs(design.points(i, k) - x[k]));
                }
                kvec(i) = prod;
            }
            const double reduction = kvec.dot(llt.solve(kvec));
            const double v = 1.0 - reduction;
            sum += v;
            sumsq += v * v;
        }
        block_sum[b] = sum;
        block_sumsq[b] = sumsq;
    };

    const auto total_blocks = static_cast<std::int64_t>(n_blocks);
#ifdef MATERN_HAS_OPENMP
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < total_blocks; ++b) run_block(static_cast<std::uint64_t>(b));
    } else {
        for (std::int64_t b = 0; b < total_blocks; ++b) run_block(static_cast<std::uint64_t>(b));
    }
#else
    (void)parallel;
    for (std::int64_t b = 0; b < total_blocks; ++b) run_block(static_cast<std::uint64_t>(b));
#endif

    StableSum sum_acc;
    StableSum sumsq_acc;
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
        sum_acc.add(block_sum[b]);
        sumsq_acc.add(block_sumsq[b]);
    }
    const auto count = static_cast<double>(n_samples);
    const double mean = sum_acc.total() / count;
    const double var = std::max(0.0, (sumsq_acc.total() / count - mean * mean) *
                                         count / (count - 1.0));
    McResult result;
    result.mean = mean;
    result.standard_error = std::sqrt(var / count);
    result.n_samples = n_samples;
    result.seed = seed;
    return result;
}

}  // namespace matern
