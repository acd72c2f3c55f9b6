#include "matern/product_integral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "matern/imspe.hpp"
#include "matern/order.hpp"
#include "matern/summation.hpp"

namespace matern {

namespace {

constexpr double kThetaLimitFloor = 1e-12;

// e^{-x} is exactly 0.0 in double for x beyond this, so a group whose
// exponent exceeds it contributes nothing and is skipped. The skip also
// bounds every polynomial argument actually evaluated (B, A+, A- <= 2x the
// surviving exponent <= 1490), keeping the brackets finite: without it,
// extreme theta could pair an overflowed polynomial with an underflowed
// exponential and produce inf * 0.
constexpr double kExpUnderflow = 745.0;

struct FloatTerm {
    int j, k, l, m;
    double w;
};

struct ProductCache {
    ProductTermTable exact_table;
    ConsolidatedBrackets exact_brackets;
    std::vector<FloatTerm> terms;
    std::vector<double> inv_fact;               // 1/t!, t <= 2p+1
    double prefactor = 0.0;                     // [p!/(2p)!]^2
    double inv_scale = 0.0;                     // 1 / (4 ((2p)!/p!)^2)
    std::vector<double> e_delta;                // ascending B powers
    std::vector<std::vector<double>> e_plus;    // [l][t]
    std::vector<std::vector<double>> e_minus;   // [l][t]
};

ProductTermTable build_term_table(int p) {
    ProductTermTable table;
    table.p = p;
    table.prefactor = BigRat(big_factorial(p) * big_factorial(p),
                             big_factorial(2 * p) * big_factorial(2 * p));
    for (int j = 0; j <= p; ++j) {
        for (int k = 0; k <= p; ++k) {
            for (int l = 0; l <= k; ++l) {
                ProductTerm term;
                term.j = j;
                term.k = k;
                term.l = l;
                term.m = j + k - l;
                term.weight = BigRat(
                    big_factorial(2 * p - j) * big_factorial(2 * p - k) *
                        big_factorial(term.m),
                    4 * big_factorial(p - j) * big_factorial(j) *
                        big_factorial(p - k) * big_factorial(l) *
                        big_factorial(k - l));
                table.terms.push_back(std::move(term));
            }
        }
    }
    return table;
}

ConsolidatedBrackets build_brackets(const ProductTermTable& table) {
    const int p = table.p;
    ConsolidatedBrackets br;
    br.p = p;
    const BigInt ratio = big_factorial(2 * p) / big_factorial(p);
    br.scale = 4 * ratio * ratio;
    br.e_delta.assign(2 * p + 2, BigRat(0));
    br.e_plus.assign(p + 1, std::vector<BigRat>(2 * p + 1, BigRat(0)));
    br.e_minus.assign(p + 1, std::vector<BigRat>(2 * p + 1, BigRat(0)));

    for (const ProductTerm& term : table.terms) {
        const BigRat w4 = 4 * term.weight;  // scale * prefactor * w == 4 w
        const int sign_l = (term.l % 2 == 0) ? 1 : -1;
        const int sign_kl = ((term.k + term.l) % 2 == 0) ? 1 : -1;
        br.e_delta[term.l] += w4;
        for (int t = 0; t <= term.m; ++t) {
            const BigRat v = w4 / big_factorial(t);
            br.e_delta[term.l + t] += sign_l * v;
            br.e_plus[term.l][t] += v;
            br.e_minus[term.l][t] += sign_l * v;
        }
        br.e_delta[term.j + term.k + 1] += sign_kl * w4 / big_factorial(term.m + 1);
    }
    return br;
}

const ProductCache& product_cache(int p) {
    validate_order(p);
    static std::mutex mu;
    static std::map<int, std::unique_ptr<const ProductCache>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[p];
    if (!slot) {
        auto built = std::make_unique<ProductCache>();
        built->exact_table = build_term_table(p);
        built->exact_brackets = build_brackets(built->exact_table);
        built->terms.reserve(built->exact_table.terms.size());
        for (const ProductTerm& t : built->exact_table.terms) {
            built->terms.push_back(
                {t.j, t.k, t.l, t.m, t.weight.convert_to<double>()});
        }
        built->inv_fact.resize(2 * p + 2);
        for (int t = 0; t <= 2 * p + 1; ++t) {
            built->inv_fact[t] = BigRat(1, big_factorial(t)).convert_to<double>();
        }
        built->prefactor = built->exact_table.prefactor.convert_to<double>();
        built->inv_scale = BigRat(1, built->exact_brackets.scale).convert_to<double>();
        built->e_delta.reserve(built->exact_brackets.e_delta.size());
        for (const BigRat& q : built->exact_brackets.e_delta) {
            built->e_delta.push_back(q.convert_to<double>());
        }
        for (const auto& row : built->exact_brackets.e_plus) {
            std::vector<double> r;
            r.reserve(row.size());
            for (const BigRat& q : row) r.push_back(q.convert_to<double>());
            built->e_plus.push_back(std::move(r));
        }
        for (const auto& row : built->exact_brackets.e_minus) {
            std::vector<double> r;
            r.reserve(row.size());
            for (const BigRat& q : row) r.push_back(q.convert_to<double>());
            built->e_minus.push_back(std::move(r));
        }
        slot = std::move(built);
    }
    return *slot;
}

// Scaled geometry shared by both evaluation paths. An exponential that has
// underflowed is stored as exactly 0.0 and its group must be skipped, not
// multiplied out.
struct ScaledArgs {
    double s, a_plus, a_minus, b_scaled;
    double e_delta, e_plus, e_minus;
};

// Order so b >= a, then reflect (a,b) -> (-b,-a) when a+b > 0. Reflection
// leaves the integral invariant and makes J(a,b), J(b,a), and J(-b,-a) all
// evaluate on identical arguments, so those symmetries hold bit-for-bit.
void canonicalize(double& a, double& b) {
    if (a > b) std::swap(a, b);
    if (a + b > 0.0) {
        const double na = -b;
        const double nb = -a;
        a = na;
        b = nb;
    }
}

ScaledArgs scale_args(int p, double theta, double a, double b) {
    ScaledArgs sa;
    sa.s = std::sqrt((2.0 * p + 1.0) * theta);
    sa.a_plus = 2.0 * sa.s * (1.0 + a);
    sa.a_minus = 2.0 * sa.s * (1.0 - a);
    sa.b_scaled = 2.0 * sa.s * (b - a);
    const double x_delta = sa.s * (b - a);
    const double x_plus = sa.s * (2.0 + a + b);
    const double x_minus = sa.s * (2.0 - a - b);
    sa.e_delta = x_delta > kExpUnderflow ? 0.0 : std::exp(-x_delta);
    sa.e_plus = x_plus > kExpUnderflow ? 0.0 : std::exp(-x_plus);
    sa.e_minus = x_minus > kExpUnderflow ? 0.0 : std::exp(-x_minus);
    return sa;
}

double pow_int(double x, int n) {
    // n is tiny (<= 2p+1); 0^0 == 1 by the l = 0 convention.
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double trunc_exp(double x, int m, const std::vector<double>& /*inv_fact*/) {
    double sum = 1.0;
    double term = 1.0;
    for (int t = 1; t <= m; ++t) {
        term *= x / t;
        sum += term;
    }
    return sum;
}

void validate_pair(int p, double theta, double a, double b) {
    validate_order(p);
    validate_theta(theta);
    validate_coordinate(a, "a");
    validate_coordinate(b, "b");
}

IntegralResult make_result(int p, double theta, double a, double b, EvalMethod method) {
    IntegralResult res;
    res.p = p;
    res.theta = theta;
    res.a = a;
    res.b = b;
    res.method = method;
    return res;
}

}  // namespace

const ProductTermTable& product_term_table(int p) {
    return product_cache(p).exact_table;
}

const ConsolidatedBrackets& product_integral_consolidated_coeffs(int p) {
    return product_cache(p).exact_brackets;
}

std::vector<BigInt> normalized_distance_row(int p) {
    if (p < 1) throw std::invalid_argument("normalized_distance_row requires p >= 1");
    const ConsolidatedBrackets& br = product_integral_consolidated_coeffs(p);
    const int deg = 2 * p + 1;
    std::vector<BigRat> h(deg + 1);
    for (int i = 0; i <= deg; ++i) h[i] = br.e_delta[i] * big_pow2(i);
    std::vector<BigInt> row(deg + 1);
    for (int i = 0; i <= deg; ++i) {
        const BigRat q = h[i] / h[deg];
        if (boost::multiprecision::denominator(q) != 1) {
            throw std::logic_error("normalized row entry not integral");
        }
        row[i] = boost::multiprecision::numerator(q);
    }
    return row;
}

IntegralResult product_integral_ex(int p, double theta, double a, double b) {
    validate_pair(p, theta, a, b);
    IntegralResult res = make_result(p, theta, a, b, EvalMethod::closed_consolidated);
    if (theta < kThetaLimitFloor) {
        res.value = 1.0;
        res.limit_case = true;
        return res;
    }
    canonicalize(a, b);
    const ProductCache& pc = product_cache(p);
    const ScaledArgs sa = scale_args(p, theta, a, b);
    if (sa.e_delta == 0.0 && sa.e_plus == 0.0 && sa.e_minus == 0.0) {
        res.value = 0.0;
        return res;
    }

    StableSum acc;
    if (sa.e_delta != 0.0) {
        double pd = pc.e_delta.back();
        for (int i = static_cast<int>(pc.e_delta.size()) - 2; i >= 0; --i) {
            pd = pd * sa.b_scaled + pc.e_delta[i];
        }
        acc.add(pd * sa.e_delta);
    }
    if (sa.e_plus != 0.0) {
        double pp = 0.0;
        double bl = 1.0;
        for (int l = 0; l <= p; ++l) {
            const std::vector<double>& row = pc.e_plus[l];
            double h = row.back();
            for (int t = static_cast<int>(row.size()) - 2; t >= 0; --t) {
                h = h * sa.a_plus + row[t];
            }
            pp += bl * h;
            bl *= sa.b_scaled;
        }
        acc.add(-pp * sa.e_plus);
    }
    if (sa.e_minus != 0.0) {
        double pm = 0.0;
        double bl = 1.0;
        for (int l = 0; l <= p; ++l) {
            const std::vector<double>& row = pc.e_minus[l];
            double h = row.back();
            for (int t = static_cast<int>(row.size()) - 2; t >= 0; --t) {
                h = h * sa.a_minus + row[t];
            }
            pm += bl * h;
            bl *= sa.b_scaled;
        }
        acc.add(-pm * sa.e_minus);
    }
    res.value = acc.total() * pc.inv_scale / sa.s;
    return res;
}

IntegralResult product_integral_direct_ex(int p, double theta, double a, double b) {
    validate_pair(p, theta, a, b);
    IntegralResult res = make_result(p, theta, a, b, EvalMethod::closed_direct);
    if (theta < kThetaLimitFloor) {
        res.value = 1.0;
        res.limit_case = true;
        return res;
    }
    canonicalize(a, b);
    const ProductCache& pc = product_cache(p);
    const ScaledArgs sa = scale_args(p, theta, a, b);
    if (sa.e_delta == 0.0 && sa.e_plus == 0.0 && sa.e_minus == 0.0) {
        res.value = 0.0;
        return res;
    }

    StableSum acc;
    for (const FloatTerm& t : pc.terms) {
        const double bl = pow_int(sa.b_scaled, t.l);
        const double sign_l = (t.l % 2 == 0) ? 1.0 : -1.0;
        if (sa.e_delta != 0.0) {
            const double sign_kl = ((t.k + t.l) % 2 == 0) ? 1.0 : -1.0;
            const double td = bl + sign_l * bl * trunc_exp(sa.b_scaled, t.m, pc.inv_fact) +
                              sign_kl * pow_int(sa.b_scaled, t.j + t.k + 1) *
                                  pc.inv_fact[t.m + 1];
            acc.add(t.w * td * sa.e_delta);
        }
        if (sa.e_plus != 0.0) {
            const double tp = bl * trunc_exp(sa.a_plus, t.m, pc.inv_fact);
            acc.add(-t.w * tp * sa.e_plus);
        }
        if (sa.e_minus != 0.0) {
            const double tm = sign_l * bl * trunc_exp(sa.a_minus, t.m, pc.inv_fact);
            acc.add(-t.w * tm * sa.e_minus);
        }
    }
    res.value = acc.total() * pc.prefactor / sa.s;
    return res;
}

double product_integral(int p, double theta, double a, double b) {
    return product_integral_ex(p, theta, a, b).value;
}

double product_integral_direct(int p, double theta, double a, double b) {
    return product_integral_direct_ex(p, theta, a, b).value;
}

std::vector<std::vector<double>> product_integral_matrix(int p,
                                                         const std::vector<double>& theta,
                                                         const Design& design,
                                                         bool parallel) {
    if (static_cast<int>(theta.size()) != design.d()) {
        throw std::invalid_argument("theta count does not match design dimension");
    }
    const int n = design.n();
    const int d = design.d();
    std::vector<std::vector<double>> R(n, std::vector<double>(n, 0.0));

    // Upper triangle flattened so the parallel loop writes disjoint slots.
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(n * (n + 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
    }

    const auto eval_pair = [&](int idx) {
        const auto [i, j] = pairs[idx];
        double prod = 1.0;
        for (int k = 0; k < d; ++k) {
            prod *= product_integral(p, theta[k], design.points(i, k), design.points(j, k));
        }
        R[i][j] = prod;
        R[j][i] = prod;
    };

    const int total = static_cast<int>(pairs.size());
#ifdef MATERN_HAS_OPENMP
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int idx = 0; idx < total; ++idx) eval_pair(idx);
        return R;
    }
#else
    (void)parallel;
#endif
    for (int idx = 0; idx < total; ++idx) eval_pair(idx);
    return R;
}

}  // namespace matern
