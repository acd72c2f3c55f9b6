#ifndef MATERN_ORACLE_HPP
#define MATERN_ORACLE_HPP

#include <cstdint>
#include <vector>

namespace matern {

struct Design;  // imspe.hpp

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on
// the Legendre recurrence and cached per order.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

// Panel quadrature plan. The integrands are smooth except for derivative
// kinks at x = a (and x = b), so panels must split there; within a panel the
// integrand is analytic and fixed-order Gauss-Legendre converges
// geometrically. Panels are additionally capped at width ~40/s so that steep
// exponentials (large theta) stay resolved at 64 nodes.
struct QuadratureSpec {
    int nodes_per_panel = 64;
    std::vector<double> panel_boundaries;  // strictly increasing, from -1 to 1
};

// Builders: boundaries {-1, kinks..., 1} with the width cap applied.
// decay_scale is s = sqrt((2p+1) theta).
QuadratureSpec make_quadrature_spec(const std::vector<double>& kinks,
                                    double decay_scale,
                                    int nodes_per_panel = 64);

// (1/2) integral of K(|a-x|) over [-1,1].
double quad_single(int p, double theta, double a, const QuadratureSpec& spec);
double quad_single(int p, double theta, double a, int nodes_per_panel = 64);

// (1/2) integral of K(|a-x|) K(|b-x|) over [-1,1].
double quad_product(int p, double theta, double a, double b, const QuadratureSpec& spec);
double quad_product(int p, double theta, double a, double b, int nodes_per_panel = 64);

// Monte-Carlo estimate of the integrated prediction variance: the mean over
// x ~ Uniform([-1,1]^d) of 1 - k(x)^T C^{-1} k(x), with the standard error of
// that mean. Sampling runs in fixed-size blocks seeded from (seed, block) and
// reduced in block order, so the result is bit-identical for a given seed
// regardless of thread count.
struct McResult {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};
McResult mc_imspe(int p, const std::vector<double>& theta, const Design& design,
                  std::uint64_t n_samples, std::uint64_t seed, bool parallel = false);

}  // namespace matern

#endif  // MATERN_ORACLE_HPP
