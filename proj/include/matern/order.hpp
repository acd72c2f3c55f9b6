#ifndef MATERN_ORDER_HPP
#define MATERN_ORDER_HPP

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace matern {

// Default ceiling for the smoothness order p (nu = p + 1/2).
inline constexpr int kDefaultMaxOrder = 16;

// Runtime ceiling; MATERN_IMSPE_PMAX overrides the default. Re-read on each
// call so tests can exercise the override without restarting the process.
inline int max_order() {
    if (const char* env = std::getenv("MATERN_IMSPE_PMAX")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0) return static_cast<int>(v);
    }
    return kDefaultMaxOrder;
}

inline void validate_order(int p) {
    if (p < 0 || p > max_order()) {
        throw std::invalid_argument("order p out of range: p=" + std::to_string(p) +
                                    ", allowed 0.." + std::to_string(max_order()));
    }
}

inline void validate_theta(double theta) {
    if (!(theta > 0.0) || theta > 1e300) {
        throw std::invalid_argument("theta must be positive and finite, got " +
                                    std::to_string(theta));
    }
}

inline void validate_coordinate(double x, const char* name) {
    if (!(x >= -1.0 && x <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [-1,1], got " +
                                    std::to_string(x));
    }
}

}  // namespace matern

#endif  // MATERN_ORDER_HPP
