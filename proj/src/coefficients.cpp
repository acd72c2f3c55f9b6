#include "matern/coefficients.hpp"

#include <stdexcept>

#include "matern/order.hpp"
#include "matern/rng.hpp"

namespace matern {

CoefficientSet make_coefficients(int p) {
    validate_order(p);
    CoefficientSet out;
    out.p = p;
    out.a0 = big_pow2(p) * big_factorial(p);
    out.prefactor_denominator = 2 * big_double_factorial(2 * p - 1);

    out.b.reserve(p + 1);
    const BigInt two_p = big_pow2(p);
    for (int j = 0; j <= p; ++j) {
        const BigInt num = big_factorial(2 * p - j) * big_pow2(j);
        const BigInt den = big_factorial(p - j) * two_p;
        if (num % den != 0) {
            throw std::logic_error("b_j not integral at p=" + std::to_string(p) +
                                   " j=" + std::to_string(j));
        }
        out.b.push_back(num / den);
    }

    out.c.reserve(p);
    BigInt partial = 0;
    for (int k = 0; k < p; ++k) {
        partial += out.b[k];
        const BigInt num = out.a0 - partial;
        const BigInt den = big_factorial(k + 1);
        if (num % den != 0) {
            throw std::logic_error("c_k not integral at p=" + std::to_string(p) +
                                   " k=" + std::to_string(k));
        }
        out.c.push_back(num / den);
    }
    return out;
}

IdentityReport verify_double_factorial_identity(int p_max) {
    if (p_max > max_order()) {
        throw std::invalid_argument("p_max exceeds order ceiling");
    }
    IdentityReport rep;
    rep.identity = "(2p)!/p! == (2p-1)!! 2^p";
    rep.p_max = p_max;
    for (int p = 0; p <= p_max; ++p) {
        const BigInt lhs = big_factorial(2 * p) / big_factorial(p);
        const BigInt rhs = big_double_factorial(2 * p - 1) * big_pow2(p);
        if (lhs != rhs) rep.failures.push_back(p);
    }
    return rep;
}

IdentityReport verify_companion_binomial_identity(int p_max) {
    if (p_max > max_order()) {
        throw std::invalid_argument("p_max exceeds order ceiling");
    }
    IdentityReport rep;
    rep.identity = "sum_j ((2p-j)!/(p-j)!) 2^j == 4^p p!";
    rep.p_max = p_max;
    for (int p = 0; p <= p_max; ++p) {
        BigInt lhs = 0;
        for (int j = 0; j <= p; ++j) {
            lhs += (big_factorial(2 * p - j) / big_factorial(p - j)) * big_pow2(j);
        }
        const BigInt rhs = big_pow2(2 * p) * big_factorial(p);
        if (lhs != rhs) rep.failures.push_back(p);
    }
    return rep;
}

int verify_summation_swap_identity(int p_max, int trials, std::uint64_t seed) {
    int failures = 0;
    Xoshiro256pp rng(splitmix64_mix(seed));
    for (int t = 0; t < trials; ++t) {
        const int p = static_cast<int>(rng.next() % (p_max + 1));
        std::vector<BigRat> f(p + 1), g(p + 1);
        for (int i = 0; i <= p; ++i) {
            // Small signed rationals; denominators bounded so the exact sums
            // stay cheap.
            const auto num = static_cast<std::int64_t>(rng.next() % 201) - 100;
            const auto den = static_cast<std::int64_t>(rng.next() % 99) + 1;
            f[i] = BigRat(num, den);
            const auto num2 = static_cast<std::int64_t>(rng.next() % 201) - 100;
            const auto den2 = static_cast<std::int64_t>(rng.next() % 99) + 1;
            g[i] = BigRat(num2, den2);
        }
        BigRat lhs = 0, rhs = 0;
        for (int j = 0; j <= p; ++j) {
            BigRat inner = 0;
            for (int m = 0; m <= j; ++m) inner += g[m];
            lhs += f[j] * inner;
        }
        for (int m = 0; m <= p; ++m) {
            BigRat inner = 0;
            for (int j = m; j <= p; ++j) inner += f[j];
            rhs += g[m] * inner;
        }
        if (lhs != rhs) ++failures;
    }
    return failures;
}

std::vector<BigInt> bessel_row(int p) {
    if (p < 1) throw std::invalid_argument("bessel_row requires p >= 1");
    validate_order(p);

    // Accumulate the distance-exponential bracket of the product integral,
    // coefficient of B^i, by walking the triple sum power by power. The
    // common factor 1/4 of every weight cancels in the normalization and is
    // dropped.
    const int deg = 2 * p + 1;
    std::vector<BigRat> g(deg + 1, BigRat(0));
    for (int j = 0; j <= p; ++j) {
        for (int k = 0; k <= p; ++k) {
            for (int l = 0; l <= k; ++l) {
                const int m = j + k - l;
                const BigRat w(big_factorial(2 * p - j) * big_factorial(2 * p - k) *
                                   big_factorial(m),
                               big_factorial(p - j) * big_factorial(j) *
                                   big_factorial(p - k) * big_factorial(l) *
                                   big_factorial(k - l));
                const int sign_l = (l % 2 == 0) ? 1 : -1;
                const int sign_kl = ((k + l) % 2 == 0) ? 1 : -1;
                g[l] += w;                                    // standalone B^l
                for (int t = 0; t <= m; ++t) {                // B^l T(B, m)
                    g[l + t] += sign_l * w / big_factorial(t);
                }
                g[j + k + 1] += sign_kl * w / big_factorial(m + 1);
            }
        }
    }

    // Half-scale substitution B = 2B', then normalize the leading
    // coefficient to 1. Every entry must come out an exact integer.
    for (int i = 0; i <= deg; ++i) g[i] *= big_pow2(i);
    const BigRat lead = g[deg];
    std::vector<BigInt> row(deg + 1);
    for (int i = 0; i <= deg; ++i) {
        const BigRat q = g[i] / lead;
        if (boost::multiprecision::denominator(q) != 1) {
            throw std::logic_error("normalized row entry not integral at p=" +
                                   std::to_string(p) + " i=" + std::to_string(i));
        }
        row[i] = boost::multiprecision::numerator(q);
    }
    return row;
}

const std::vector<std::vector<std::int64_t>>& bessel_reference_rows() {
    // Published integer rows for nu = p + 1/2, p = 1..4 (descending-degree
    // order; bessel_row reversed must match).
    static const std::vector<std::vector<std::int64_t>> rows = {
        {1, 6, 15, 15},
        {1, 15, 105, 420, 945, 945},
        {1, 28, 378, 3150, 17325, 62370, 135135, 135135},
        {1, 45, 990, 13860, 135135, 945945, 4729725, 16216200, 34459425, 34459425},
    };
    return rows;
}

}  // namespace matern
