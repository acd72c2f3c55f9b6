#ifndef MATERN_IMSPE_HPP
#define MATERN_IMSPE_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matern {

// n design points in [-1,1]^d.
struct Design {
    Eigen::MatrixXd points;  // n x d
    [[nodiscard]] int n() const { return static_cast<int>(points.rows()); }
    [[nodiscard]] int d() const { return static_cast<int>(points.cols()); }
};

// CSV loader. Contract: UTF-8, comma-separated, required header
// "x1,...,xd", one row of d decimal floats per point, no trailing commas.
// Errors carry the 1-based line number and, for range violations, the
// offending row and column.
Design load_design(const std::string& path);
Design parse_design_csv(const std::string& text, const std::string& origin);

// Exact-duplicate rows (they make the correlation matrix singular); each
// pair is (i, j) with i < j, 0-based.
std::vector<std::pair<int, int>> find_duplicate_points(const Design& design);

// Thrown when the correlation matrix is numerically singular: reciprocal
// condition estimate below the refusal threshold (1e-14) or a failed
// positive-definite factorization.
class IllConditionedError : public std::runtime_error {
public:
    IllConditionedError(const std::string& what, double rcond)
        : std::runtime_error(what), rcond_(rcond) {}
    [[nodiscard]] double rcond() const { return rcond_; }

private:
    double rcond_;
};

// Assembled matrices for one design:
//   C[i][j]  = prod_k K(p, theta_k, |x_{i,k} - x_{j,k}|)   (unit diagonal)
//   R0[i]    = prod_k I(p, theta_k, x_{i,k})
//   R[i][j]  = prod_k J(p, theta_k, (x_{i,k}, x_{j,k}))
//   imspe    = 1 - trace(C^{-1} R)
// The IMSPE expression is the simple-kriging, unit-process-variance
// integrated prediction variance; it is validated against the Monte-Carlo
// oracle rather than assumed (see tests and docs/formula_notes.md).
struct ImspeMatrices {
    Eigen::MatrixXd C;
    Eigen::VectorXd R0;
    Eigen::MatrixXd R;
    double imspe = 0.0;
    double rcond = 0.0;
};

ImspeMatrices assemble(int p, const std::vector<double>& theta, const Design& design,
                       bool parallel = false);

}  // namespace matern

#endif  // MATERN_IMSPE_HPP
