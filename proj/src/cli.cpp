#include "matern/cli.hpp"

#include <cstdio>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matern/coefficients.hpp"
#include "matern/imspe.hpp"
#include "matern/integral_result.hpp"
#include "matern/order.hpp"
#include "matern/product_integral.hpp"
#include "matern/single_integral.hpp"
#include "matern/validate.hpp"

namespace matern {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;

// All floats are printed with 17 significant digits so every double
// round-trips exactly; this is also why the JSON is hand-assembled rather
// than produced by a serializer with its own float policy.
std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void emit_error(std::ostream& err, const std::string& type, const std::string& message) {
    err << "{\"error\":\"" << json_escape(message) << "\",\"type\":\"" << type << "\"}\n";
}

std::vector<double> parse_theta_list(const std::string& csv) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        const std::string token =
            csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            values.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("--theta entry '" + token + "' is not a number");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

std::string join_bigints(const std::vector<BigInt>& values, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += values[i].str();
    }
    return out;
}

std::string bigint_json_array(const std::vector<BigInt>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += "\"" + values[i].str() + "\"";
    }
    return out + "]";
}

// ---- coeffs ----------------------------------------------------------

void print_coeffs_text(std::ostream& out, const CoefficientSet& cs) {
    out << cs.p << "," << cs.a0.str();
    for (const BigInt& b : cs.b) out << "," << b.str();
    out << "\n" << join_bigints(cs.c, ",") << "\n";
}

std::string coeffs_json_entry(const CoefficientSet& cs) {
    std::string out = "{\"p\":" + std::to_string(cs.p);
    out += ",\"a0\":\"" + cs.a0.str() + "\"";
    out += ",\"b\":" + bigint_json_array(cs.b);
    out += ",\"c\":" + bigint_json_array(cs.c);
    out += ",\"prefactor_denominator\":\"" + cs.prefactor_denominator.str() + "\"}";
    return out;
}

int cmd_coeffs(std::ostream& out, int p, bool up_to, const std::string& format) {
    std::vector<CoefficientSet> sets;
    for (int q = up_to ? 0 : p; q <= p; ++q) sets.push_back(make_coefficients(q));
    if (format == "json") {
        out << "{\"orders\":[";
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (i) out << ",";
            out << coeffs_json_entry(sets[i]);
        }
        out << "]}\n";
    } else if (format == "csv") {
        // One row per order: p, a0, b_0..b_p, c_0..c_{p-1}.
        for (const CoefficientSet& cs : sets) {
            out << cs.p << "," << cs.a0.str();
            for (const BigInt& b : cs.b) out << "," << b.str();
            for (const BigInt& c : cs.c) out << "," << c.str();
            out << "\n";
        }
    } else {
        for (const CoefficientSet& cs : sets) print_coeffs_text(out, cs);
    }
    return kExitOk;
}

// ---- single / product ------------------------------------------------

void print_integral(std::ostream& out, const IntegralResult& res, bool has_b,
                    const std::string& format) {
    if (format == "json") {
        out << "{\"p\":" << res.p << ",\"theta\":" << fmt_double(res.theta)
            << ",\"a\":" << fmt_double(res.a);
        if (has_b) out << ",\"b\":" << fmt_double(res.b);
        out << ",\"value\":" << fmt_double(res.value) << ",\"method\":\""
            << eval_method_name(res.method) << "\",\"limit_case\":"
            << (res.limit_case ? "true" : "false") << "}\n";
    } else if (format == "csv") {
        out << "p,theta,a" << (has_b ? ",b" : "") << ",value,limit_case\n"
            << res.p << "," << fmt_double(res.theta) << "," << fmt_double(res.a);
        if (has_b) out << "," << fmt_double(res.b);
        out << "," << fmt_double(res.value) << ","
            << (res.limit_case ? "true" : "false") << "\n";
    } else {
        out << fmt_double(res.value);
        if (res.limit_case) out << " (theta-limit)";
        out << "\n";
    }
}

// ---- imspe -------------------------------------------------------------

void print_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    out << "[";
    for (int i = 0; i < m.rows(); ++i) {
        if (i) out << ",";
        out << "[";
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out << ",";
            out << fmt_double(m(i, j));
        }
        out << "]";
    }
    out << "]";
}

int cmd_imspe(std::ostream& out, int p, const std::string& theta_csv,
              const std::string& design_path, bool with_matrices, bool parallel) {
    const std::vector<double> theta = parse_theta_list(theta_csv);
    const Design design = load_design(design_path);
    const ImspeMatrices result = assemble(p, theta, design, parallel);

    out << "{\"p\":" << p << ",\"theta\":[";
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (i) out << ",";
        out << fmt_double(theta[i]);
    }
    out << "],\"n\":" << design.n() << ",\"d\":" << design.d()
        << ",\"imspe\":" << fmt_double(result.imspe)
        << ",\"condition_estimate\":" << fmt_double(result.rcond);
    if (with_matrices) {
        out << ",\"matrices\":{\"C\":";
        print_matrix(out, result.C);
        out << ",\"R0\":[";
        for (int i = 0; i < result.R0.size(); ++i) {
            if (i) out << ",";
            out << fmt_double(result.R0(i));
        }
        out << "],\"R\":";
        print_matrix(out, result.R);
        out << "}";
    }
    out << "}\n";
    return kExitOk;
}

// ---- validate ----------------------------------------------------------

int cmd_validate(std::ostream& out, std::ostream& err, int p_max, double rtol,
                 std::uint64_t seed, int nodes, int grid_n, int cases, bool parallel) {
    const std::vector<double> thetas{1e-2, 1.0, 1e2};
    const SweepReport sweep = run_sweep(p_max, thetas, grid_n, nodes, parallel);
    const PropertyReport properties = run_property_suite(cases, seed);
    const bool pass = sweep.pass(rtol) && properties.ok();

    out << "{\"p_max\":" << p_max << ",\"thetas\":[";
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (i) out << ",";
        out << fmt_double(thetas[i]);
    }
    out << "],\"grid_n\":" << grid_n << ",\"nodes_per_panel\":" << nodes
        << ",\"rtol\":" << fmt_double(rtol) << ",\"seed\":" << seed
        << ",\"cells\":[";
    for (std::size_t i = 0; i < sweep.cells.size(); ++i) {
        const SweepCell& cell = sweep.cells[i];
        if (i) out << ",";
        out << "{\"p\":" << cell.p << ",\"theta\":" << fmt_double(cell.theta)
            << ",\"max_rel_single\":" << fmt_double(cell.max_rel_single)
            << ",\"max_rel_product\":" << fmt_double(cell.max_rel_product) << "}";
    }
    out << "],\"max_rel_single\":" << fmt_double(sweep.max_rel_single)
        << ",\"max_rel_product\":" << fmt_double(sweep.max_rel_product)
        << ",\"property_cases\":" << properties.cases
        << ",\"property_violations\":" << properties.violations.size()
        << ",\"pass\":" << (pass ? "true" : "false") << "}\n";

    if (!pass) {
        emit_error(err, "validation",
                   sweep.pass(rtol) ? "property suite found violations"
                                    : "closed form disagrees with quadrature oracle");
        return kExitValidationFailure;
    }
    return kExitOk;
}

// ---- bessel-check -------------------------------------------------------

int cmd_bessel_check(std::ostream& out, std::ostream& err, int p_max,
                     const std::string& format) {
    const BesselCheckReport report = check_bessel_conjecture(p_max);
    if (format == "json") {
        out << "{\"p_max\":" << p_max << ",\"rows\":[";
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const BesselCheckRow& row = report.rows[i];
            if (i) out << ",";
            out << "{\"p\":" << row.p << ",\"self_consistent\":"
                << (row.self_consistent ? "true" : "false")
                << ",\"fixture_checked\":" << (row.fixture_checked ? "true" : "false")
                << ",\"fixture_match\":" << (row.fixture_match ? "true" : "false")
                << ",\"row\":" << bigint_json_array(row.row) << "}";
        }
        out << "],\"pass\":" << (report.ok() ? "true" : "false") << "}\n";
    } else {
        for (const BesselCheckRow& row : report.rows) {
            out << "p=" << row.p
                << " self_consistent=" << (row.self_consistent ? "yes" : "NO");
            if (row.fixture_checked) {
                out << " fixture=" << (row.fixture_match ? "match" : "MISMATCH");
            } else {
                out << " fixture=none";
            }
            out << " row=" << join_bigints(row.row, ",") << "\n";
        }
        out << (report.ok() ? "PASS" : "FAIL") << " (" << report.rows.size()
            << " orders checked)\n";
    }
    if (!report.ok()) {
        emit_error(err, "conjecture", "integer-row check failed");
        return kExitValidationFailure;
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-form Matern IMSPE integrals over [-1,1]"};
    app.require_subcommand(1);
    // Inherited by the subcommands below; lets the global --format appear
    // after the subcommand name as well.
    app.fallthrough(true);

    std::string format = "text";
    app.add_option("--format", format, "Output format: text, csv, or json")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();

    int p = 0;
    double theta = 1.0;
    double a = 0.0;
    double b = 0.0;
    bool coeffs_max = false;
    std::string theta_csv;
    std::string design_path;
    bool with_matrices = false;
    bool parallel = false;
    int p_max = 4;
    double rtol = 1e-9;
    std::uint64_t seed = 0;
    int nodes = 128;
    int grid_n = 11;
    int cases = 1000;

    CLI::App* coeffs = app.add_subcommand("coeffs", "Exact coefficient tables");
    coeffs->add_option("--p", p, "Smoothness order (nu = p + 1/2)")->required();
    coeffs->add_flag("--max", coeffs_max, "Emit all orders 0..p");

    CLI::App* single = app.add_subcommand("single", "Average of one correlation over [-1,1]");
    single->add_option("--p", p)->required();
    single->add_option("--theta", theta)->required();
    single->add_option("--a", a)->required();

    CLI::App* product = app.add_subcommand("product", "Average of a correlation product over [-1,1]");
    product->add_option("--p", p)->required();
    product->add_option("--theta", theta)->required();
    product->add_option("--a", a)->required();
    product->add_option("--b", b)->required();

    CLI::App* imspe = app.add_subcommand("imspe", "Assemble IMSPE for a design CSV");
    imspe->add_option("--design", design_path, "Design CSV path (header x1,...,xd)")->required();
    imspe->add_option("--theta", theta_csv, "Comma-separated theta per dimension")->required();
    imspe->add_option("--p", p)->required();
    imspe->add_flag("--matrices", with_matrices, "Include C, R0, R in the output");
    imspe->add_flag("--parallel", parallel, "Evaluate matrix entries in parallel");

    CLI::App* validate = app.add_subcommand("validate", "Closed form vs quadrature oracle sweep");
    validate->add_option("--p-max", p_max)->required();
    validate->add_option("--rtol", rtol)->capture_default_str();
    validate->add_option("--seed", seed)->capture_default_str();
    validate->add_option("--nodes", nodes)->capture_default_str();
    validate->add_option("--grid", grid_n)->capture_default_str();
    validate->add_option("--cases", cases, "Randomized property cases")->capture_default_str();
    validate->add_flag("--parallel", parallel, "Sweep cells in parallel");

    CLI::App* bessel = app.add_subcommand("bessel-check", "Integer-row conjecture check");
    bessel->add_option("--p-max", p_max)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        emit_error(err, "usage", e.what());
        return kExitUsage;
    }

    try {
        if (coeffs->parsed()) return cmd_coeffs(out, p, coeffs_max, format);
        if (single->parsed()) {
            print_integral(out, single_integral_ex(p, theta, a), false, format);
            return kExitOk;
        }
        if (product->parsed()) {
            print_integral(out, product_integral_ex(p, theta, a, b), true, format);
            return kExitOk;
        }
        if (imspe->parsed()) {
            return cmd_imspe(out, p, theta_csv, design_path, with_matrices, parallel);
        }
        if (validate->parsed()) {
            return cmd_validate(out, err, p_max, rtol, seed, nodes, grid_n, cases, parallel);
        }
        if (bessel->parsed()) return cmd_bessel_check(out, err, p_max, format);
    } catch (const IllConditionedError& e) {
        err << "{\"error\":\"" << json_escape(e.what())
            << "\",\"type\":\"ill_conditioned\",\"condition_estimate\":"
            << fmt_double(e.rcond()) << "}\n";
        return kExitValidationFailure;
    } catch (const std::invalid_argument& e) {
        emit_error(err, "usage", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        emit_error(err, "internal", e.what());
        return kExitValidationFailure;
    }
    emit_error(err, "usage", "no subcommand given");
    return kExitUsage;
}

}  // namespace matern
