#include "matern/imspe.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "matern/kernel.hpp"
#include "matern/order.hpp"
#include "matern/product_integral.hpp"
#include "matern/single_integral.hpp"

namespace matern {

namespace {

constexpr double kRcondRefusal = 1e-14;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
    throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_field(const std::string& origin, int line, int column,
                   const std::string& token) {
    if (token.empty()) {
        fail(origin, line, "field " + std::to_string(column) + " is empty");
    }
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        fail(origin, line,
             "field " + std::to_string(column) + " ('" + token + "') is not a finite number");
    }
    return value;
}

}  // namespace

Design parse_design_csv(const std::string& text, const std::string& origin) {
    std::vector<std::string> lines;
    {
        std::string current;
        std::istringstream in(text);
        while (std::getline(in, current)) {
            if (!current.empty() && current.back() == '\r') current.pop_back();
            lines.push_back(current);
        }
    }

    int d = 0;
    std::vector<std::vector<double>> rows;
    bool header_seen = false;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const int line_no = static_cast<int>(li) + 1;
        if (trim(lines[li]).empty()) continue;  // blank lines carry no data
        const std::vector<std::string> fields = split_fields(lines[li]);
        if (!header_seen) {
            for (std::size_t c = 0; c < fields.size(); ++c) {
                const std::string expected = "x" + std::to_string(c + 1);
                if (fields[c] != expected) {
                    fail(origin, line_no,
                         "expected header x1,...,xd; field " + std::to_string(c + 1) +
                             " is '" + fields[c] + "', want '" + expected + "'");
                }
            }
            d = static_cast<int>(fields.size());
            header_seen = true;
            continue;
        }
        if (static_cast<int>(fields.size()) != d) {
            fail(origin, line_no,
                 "expected " + std::to_string(d) + " fields, got " +
                     std::to_string(fields.size()));
        }
        std::vector<double> row(d);
        for (int c = 0; c < d; ++c) {
            const double v = parse_field(origin, line_no, c + 1, fields[c]);
            if (!(v >= -1.0 && v <= 1.0)) {
                fail(origin, line_no,
                     "x" + std::to_string(c + 1) + " = " + fields[c] +
                         " out of range [-1,1] (design row " +
                         std::to_string(rows.size() + 1) + ")");
            }
            row[c] = v;
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) {
        throw std::invalid_argument(origin + ": missing header x1,...,xd");
    }
    if (rows.empty()) {
        throw std::invalid_argument(origin + ": no data rows");
    }

    Design design;
    design.points.resize(static_cast<int>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int c = 0; c < d; ++c) design.points(static_cast<int>(i), c) = rows[i][c];
    }
    return design;
}

Design load_design(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open design file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_design_csv(buffer.str(), path);
}

std::vector<std::pair<int, int>> find_duplicate_points(const Design& design) {
    std::vector<std::pair<int, int>> dups;
    const int n = design.n();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (design.points.row(i) == design.points.row(j)) dups.emplace_back(i, j);
        }
    }
    return dups;
}

ImspeMatrices assemble(int p, const std::vector<double>& theta, const Design& design,
                       bool parallel) {
    validate_order(p);
    const int n = design.n();
    const int d = design.d();
    if (n < 1) throw std::invalid_argument("design must contain at least one point");
    if (static_cast<int>(theta.size()) != d) {
        throw std::invalid_argument("theta count does not match design dimension");
    }
    for (double t : theta) validate_theta(t);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) validate_coordinate(design.points(i, k), "design point");
    }

    const auto dups = find_duplicate_points(design);
    if (!dups.empty()) {
        throw IllConditionedError(
            "design rows " + std::to_string(dups.front().first + 1) + " and " +
                std::to_string(dups.front().second + 1) +
                " are identical; the correlation matrix is singular",
            0.0);
    }

    ImspeMatrices out;
    out.C.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.C(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            double prod = 1.0;
            for (int k = 0; k < d; ++k) {
                prod *= matern_correlation(
                    p, theta[k], std::abs(design.points(i, k) - design.points(j, k)));
            }
            out.C(i, j) = prod;
            out.C(j, i) = prod;
        }
    }

    out.R0.resize(n);
    for (int i = 0; i < n; ++i) {
        double prod = 1.0;
        for (int k = 0; k < d; ++k) {
            prod *= single_integral(p, theta[k], design.points(i, k));
        }
        out.R0(i) = prod;
    }

    const auto R = product_integral_matrix(p, theta, design, parallel);
    out.R.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out.R(i, j) = R[i][j];
    }

    const Eigen::LLT<Eigen::MatrixXd> llt(out.C);
    if (llt.info() != Eigen::Success) {
        throw IllConditionedError("correlation matrix is not positive definite", 0.0);
    }
    out.rcond = llt.rcond();
    if (out.rcond < kRcondRefusal) {
        throw IllConditionedError(
            "correlation matrix is numerically singular (rcond " +
                std::to_string(out.rcond) + " below refusal threshold 1e-14)",
            out.rcond);
    }
    out.imspe = 1.0 - llt.solve(out.R).trace();
    return out;
}

}  // namespace matern
