#ifndef MATERN_INTEGRAL_RESULT_HPP
#define MATERN_INTEGRAL_RESULT_HPP

namespace matern {

enum class EvalMethod {
    closed_consolidated,  // per-order polynomial brackets (default product path)
    closed_direct,        // reference triple sum over the term table
    closed_single,        // single-kernel closed form
    quadrature,           // panel Gauss-Legendre oracle
};

inline const char* eval_method_name(EvalMethod m) {
    switch (m) {
        case EvalMethod::closed_consolidated: return "closed_consolidated";
        case EvalMethod::closed_direct: return "closed_direct";
        case EvalMethod::closed_single: return "closed_single";
        case EvalMethod::quadrature: return "quadrature";
    }
    return "unknown";
}

// A value plus the metadata needed to reproduce it.
struct IntegralResult {
    double value = 0.0;
    int p = 0;
    double theta = 0.0;
    double a = 0.0;
    double b = 0.0;       // unused for single-kernel integrals
    EvalMethod method = EvalMethod::closed_single;
    bool limit_case = false;  // theta below the closed-form floor; value is the limit
};

}  // namespace matern

#endif  // MATERN_INTEGRAL_RESULT_HPP
