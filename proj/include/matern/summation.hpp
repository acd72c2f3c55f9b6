#ifndef MATERN_SUMMATION_HPP
#define MATERN_SUMMATION_HPP

#include <cmath>

namespace matern {

// Neumaier-compensated accumulator. The closed-form integrals subtract
// exponential groups that nearly cancel for small scaled arguments; the
// compensation keeps the running error at one rounding of the true sum.
class StableSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double total() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace matern

#endif  // MATERN_SUMMATION_HPP
