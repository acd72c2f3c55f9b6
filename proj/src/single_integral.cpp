#include "matern/single_integral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "matern/coefficients.hpp"
#include "matern/imspe.hpp"
#include "matern/order.hpp"

#ifdef MATERN_HAS_OPENMP
#include <omp.h>
#endif

namespace matern {

namespace {

// Floor below which the closed form is returned as its theta -> 0 limit.
constexpr double kThetaLimitFloor = 1e-12;

struct SingleCache {
    double a0 = 0.0;
    std::vector<double> poly;  // [a0, c0, ..., c_{p-1}]
    double inv_prefactor = 0.0;  // 1 / (2 (2p-1)!!)
};

const SingleCache& single_cache(int p) {
    validate_order(p);
    static std::mutex mu;
    static std::map<int, std::unique_ptr<const SingleCache>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[p];
    if (!slot) {
        const SingleIntegralForm form = single_integral_form(p);
        auto built = std::make_unique<SingleCache>();
        built->a0 = form.constant.convert_to<double>();
        built->poly.reserve(form.poly.size());
        for (const BigInt& v : form.poly) built->poly.push_back(v.convert_to<double>());
        built->inv_prefactor = (BigRat(1, form.prefactor_denominator)).convert_to<double>();
        slot = std::move(built);
    }
    return *slot;
}

// One reflection branch: a0 - [a0 + c0 u + ... + c_{p-1} u^p] e^{-u}.
double branch(const SingleCache& sc, double u) {
    if (u > 745.0) return sc.a0;  // e^{-u} underflows to zero exactly
    double poly = sc.poly.back();
    for (int i = static_cast<int>(sc.poly.size()) - 2; i >= 0; --i) {
        poly = poly * u + sc.poly[i];
    }
    return sc.a0 - poly * std::exp(-u);
}

}  // namespace

SingleIntegralForm single_integral_form(int p) {
    const CoefficientSet cs = make_coefficients(p);
    SingleIntegralForm form;
    form.p = p;
    form.constant = cs.a0;
    form.poly.reserve(p + 1);
    form.poly.push_back(cs.a0);
    for (const BigInt& ck : cs.c) form.poly.push_back(ck);
    form.prefactor_denominator = cs.prefactor_denominator;
    return form;
}

IntegralResult single_integral_ex(int p, double theta, double a) {
    validate_order(p);
    validate_theta(theta);
    validate_coordinate(a, "a");

    IntegralResult res;
    res.p = p;
    res.theta = theta;
    res.a = a;
    res.method = EvalMethod::closed_single;

    if (theta < kThetaLimitFloor) {
        // The 1/s prefactor and the two braces vanish together; the value is
        // the kernel's unit limit integrated over the unit-normalized range.
        res.value = 1.0;
        res.limit_case = true;
        return res;
    }

    const SingleCache& sc = single_cache(p);
    const double s = std::sqrt((2.0 * p + 1.0) * theta);
    // Same two addends for a and -a, so I(a) == I(-a) bit-for-bit.
    const double sum = branch(sc, s * (1.0 + a)) + branch(sc, s * (1.0 - a));
    res.value = sum * sc.inv_prefactor / s;
    return res;
}

double single_integral(int p, double theta, double a) {
    return single_integral_ex(p, theta, a).value;
}

std::vector<std::vector<double>> single_integral_vector(int p,
                                                        const std::vector<double>& theta,
                                                        const Design& design) {
    if (static_cast<int>(theta.size()) != design.d()) {
        throw std::invalid_argument("theta count does not match design dimension");
    }
    const int n = design.n();
    const int d = design.d();
    std::vector<std::vector<double>> out(n, std::vector<double>(d));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
            out[i][k] = single_integral(p, theta[k], design.points(i, k));
        }
    }
    return out;
}

}  // namespace matern
