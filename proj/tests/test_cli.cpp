#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "matern/cli.hpp"
#include "matern/imspe.hpp"
#include "matern/product_integral.hpp"
#include "matern/single_integral.hpp"

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("matern_imspe");
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    CliRun r;
    r.code = matern::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path.string();
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

double json_number(const std::string& text, const std::string& key) {
    const std::string tag = "\"" + key + "\":";
    const auto pos = text.find(tag);
    REQUIRE(pos != std::string::npos);
    return std::strtod(text.c_str() + pos + tag.size(), nullptr);
}

}  // namespace

TEST_CASE("coeffs: text output matches the published p=3 rows") {
    const CliRun r = run({"coeffs", "--p", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "3,48,15,15,12,6\n33,9,1\n");
    CHECK(r.err.empty());
}

TEST_CASE("coeffs --max emits every order from zero") {
    const CliRun r = run({"coeffs", "--p", "1", "--max"});
    CHECK(r.code == 0);
    // p=0 has no c coefficients, so its second row is empty.
    CHECK(r.out == "0,1,1\n\n1,2,1,1\n1\n");
}

TEST_CASE("coeffs: csv packs one row per order") {
    const CliRun r = run({"coeffs", "--p", "3", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "3,48,15,15,12,6,33,9,1\n");
}

TEST_CASE("coeffs: json carries exact integers as strings") {
    const CliRun r = run({"coeffs", "--p", "2", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "{\"orders\":[{\"p\":2,\"a0\":\"8\",\"b\":[\"3\",\"3\",\"2\"],"
          "\"c\":[\"5\",\"1\"],\"prefactor_denominator\":\"6\"}]}\n");
}

TEST_CASE("single: text prints the bare value at 17 significant digits") {
    const CliRun r = run({"single", "--p", "1", "--theta", "1.0", "--a", "0.3"});
    CHECK(r.code == 0);
    CHECK(r.out == fmt(matern::single_integral(1, 1.0, 0.3)) + "\n");
}

TEST_CASE("single: theta below the floor is flagged as a limit") {
    const CliRun r = run({"single", "--p", "1", "--theta", "1e-13", "--a", "0.3"});
    CHECK(r.code == 0);
    CHECK(r.out == "1 (theta-limit)\n");

    const CliRun j = run({"single", "--p", "1", "--theta", "1e-13", "--a", "0.3", "--format", "json"});
    CHECK(j.code == 0);
    CHECK(j.out == "{\"p\":1,\"theta\":" + fmt(1e-13) +
                       ",\"a\":" + fmt(0.3) +
                       ",\"value\":1,\"method\":\"closed_single\",\"limit_case\":true}\n");
}

TEST_CASE("single: json schema and round-trip") {
    const CliRun r = run({"single", "--p", "2", "--theta", "0.7", "--a", "-0.4", "--format", "json"});
    CHECK(r.code == 0);
    const auto res = matern::single_integral_ex(2, 0.7, -0.4);
    CHECK(r.out == "{\"p\":2,\"theta\":" + fmt(0.7) + ",\"a\":" + fmt(-0.4) +
                       ",\"value\":" + fmt(res.value) +
                       ",\"method\":\"closed_single\",\"limit_case\":false}\n");
    // 17 significant digits round-trip exactly.
    CHECK(json_number(r.out, "value") == res.value);
}

TEST_CASE("single: csv emits a header and one data row") {
    const CliRun r = run({"single", "--p", "1", "--theta", "1.0", "--a", "0.3", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "p,theta,a,value,limit_case\n1,1," + fmt(0.3) + "," +
                       fmt(matern::single_integral(1, 1.0, 0.3)) + ",false\n");
}

TEST_CASE("product: json includes b and keeps field order") {
    const CliRun r = run({"product", "--p", "2", "--theta", "0.5", "--a", "-0.3", "--b", "0.4",
                          "--format", "json"});
    CHECK(r.code == 0);
    const auto res = matern::product_integral_ex(2, 0.5, -0.3, 0.4);
    CHECK(r.out == "{\"p\":2,\"theta\":" + fmt(0.5) + ",\"a\":" + fmt(-0.3) +
                       ",\"b\":" + fmt(0.4) + ",\"value\":" + fmt(res.value) +
                       ",\"method\":\"closed_consolidated\",\"limit_case\":false}\n");
}

TEST_CASE("product: csv header carries both endpoints") {
    const CliRun r = run({"product", "--p", "1", "--theta", "1.0", "--a", "0.1", "--b", "0.2",
                          "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "p,theta,a,b,value,limit_case\n"));
}

TEST_CASE("--format is accepted before or after the subcommand") {
    const CliRun before = run({"--format", "json", "coeffs", "--p", "2"});
    const CliRun after = run({"coeffs", "--p", "2", "--format", "json"});
    CHECK(before.code == 0);
    CHECK(after.code == 0);
    CHECK(before.out == after.out);
}

TEST_CASE("imspe: JSON report with pinned field order") {
    const std::string design = write_temp("matern_cli_design.csv",
                                          "x1,x2\n-0.5,-0.3\n0.2,0.4\n0.7,-0.6\n");
    const CliRun r = run({"imspe", "--design", design, "--theta", "1.0,0.5", "--p", "2"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "{\"p\":2,\"theta\":[1,0.5],\"n\":3,\"d\":2,\"imspe\":"));
    CHECK(contains(r.out, ",\"condition_estimate\":"));
    CHECK(!contains(r.out, "matrices"));
    CHECK(r.out.back() == '\n');

    // The printed value is the library value, round-tripped exactly.
    matern::Design d;
    d.points.resize(3, 2);
    d.points << -0.5, -0.3, 0.2, 0.4, 0.7, -0.6;
    const auto direct = matern::assemble(2, {1.0, 0.5}, d);
    CHECK(json_number(r.out, "imspe") == direct.imspe);
    CHECK(json_number(r.out, "condition_estimate") == direct.rcond);

    // Identical argv gives byte-identical output, with or without --parallel.
    const CliRun again = run({"imspe", "--design", design, "--theta", "1.0,0.5", "--p", "2"});
    CHECK(again.out == r.out);
    const CliRun par =
        run({"imspe", "--design", design, "--theta", "1.0,0.5", "--p", "2", "--parallel"});
    CHECK(par.out == r.out);
}

TEST_CASE("imspe --matrices appends C, R0, R") {
    const std::string design = write_temp("matern_cli_design2.csv", "x1\n0.3\n-0.2\n");
    const CliRun r = run({"imspe", "--design", design, "--theta", "1.0", "--p", "1", "--matrices"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, ",\"matrices\":{\"C\":[[1,"));
    CHECK(contains(r.out, ",\"R0\":["));
    CHECK(contains(r.out, ",\"R\":[["));
}

TEST_CASE("imspe: duplicate design rows exit 1 with a condition estimate") {
    const std::string design = write_temp("matern_cli_dup.csv", "x1\n0.25\n0.25\n");
    const CliRun r = run({"imspe", "--design", design, "--theta", "1.0", "--p", "1"});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(contains(r.err, "\"type\":\"ill_conditioned\""));
    CHECK(contains(r.err, "\"condition_estimate\":0"));
    CHECK(contains(r.err, "design rows 1 and 2"));
}

TEST_CASE("imspe: missing design file is a usage error") {
    const CliRun r = run({"imspe", "--design", "/nonexistent/file.csv", "--theta", "1.0", "--p", "1"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "\"type\":\"usage\""));
    CHECK(contains(r.err, "cannot open design file"));
}

TEST_CASE("imspe: malformed design content is a usage error") {
    const std::string design = write_temp("matern_cli_bad.csv", "x1\n1.5\n");
    const CliRun r = run({"imspe", "--design", design, "--theta", "1.0", "--p", "1"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "out of range"));
}

TEST_CASE("imspe: bad theta list and theta/d mismatch are usage errors") {
    const std::string design = write_temp("matern_cli_design3.csv", "x1,x2\n0.1,0.2\n");
    const CliRun bad = run({"imspe", "--design", design, "--theta", "1.0,abc", "--p", "1"});
    CHECK(bad.code == 2);
    CHECK(contains(bad.err, "--theta entry"));

    const CliRun mismatch = run({"imspe", "--design", design, "--theta", "1.0", "--p", "1"});
    CHECK(mismatch.code == 2);
    CHECK(contains(mismatch.err, "\"type\":\"usage\""));
}

TEST_CASE("usage errors: unknown flag, missing required, no subcommand") {
    const CliRun unknown = run({"coeffs", "--p", "1", "--bogus"});
    CHECK(unknown.code == 2);
    CHECK(contains(unknown.err, "\"type\":\"usage\""));

    const CliRun missing = run({"single", "--p", "1", "--theta", "1.0"});
    CHECK(missing.code == 2);

    const CliRun none = run({});
    CHECK(none.code == 2);
}

TEST_CASE("domain validation surfaces as usage errors") {
    CHECK(run({"single", "--p", "-1", "--theta", "1.0", "--a", "0.0"}).code == 2);
    CHECK(run({"single", "--p", "17", "--theta", "1.0", "--a", "0.0"}).code == 2);
    CHECK(run({"single", "--p", "1", "--theta", "-1.0", "--a", "0.0"}).code == 2);
    CHECK(run({"single", "--p", "1", "--theta", "1.0", "--a", "1.5"}).code == 2);
}

TEST_CASE("MATERN_IMSPE_PMAX changes the accepted order range") {
    setenv("MATERN_IMSPE_PMAX", "2", 1);
    CHECK(run({"coeffs", "--p", "3"}).code == 2);
    setenv("MATERN_IMSPE_PMAX", "20", 1);
    CHECK(run({"coeffs", "--p", "18"}).code == 0);
    unsetenv("MATERN_IMSPE_PMAX");
    CHECK(run({"coeffs", "--p", "3"}).code == 0);
}

TEST_CASE("--help exits 0 and lists the subcommands") {
    const CliRun r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "coeffs"));
    CHECK(contains(r.out, "bessel-check"));
    CHECK(r.err.empty());
}

TEST_CASE("validate: small sweep passes and is byte-deterministic") {
    const std::vector<std::string> args{"validate", "--p-max", "1",    "--nodes", "32",
                                        "--grid",   "5",       "--cases", "50"};
    const CliRun r = run(args);
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(contains(r.out, "\"p_max\":1"));
    CHECK(contains(r.out, "\"thetas\":[0.01,1,100]"));
    CHECK(contains(r.out, "\"property_cases\":50"));
    CHECK(contains(r.out, "\"property_violations\":0"));
    CHECK(contains(r.out, "\"pass\":true"));

    const CliRun again = run(args);
    CHECK(again.out == r.out);

    std::vector<std::string> par = args;
    par.emplace_back("--parallel");
    CHECK(run(par).out == r.out);
}

TEST_CASE("validate: an unattainable rtol exits 1 with a validation error") {
    const CliRun r = run({"validate", "--p-max", "1", "--nodes", "32", "--grid", "5", "--cases",
                          "10", "--rtol", "1e-300"});
    CHECK(r.code == 1);
    CHECK(contains(r.out, "\"pass\":false"));
    CHECK(contains(r.err, "\"type\":\"validation\""));
}

TEST_CASE("bessel-check: text and json reports") {
    const CliRun text = run({"bessel-check", "--p-max", "4"});
    CHECK(text.code == 0);
    CHECK(contains(text.out, "p=1 self_consistent=yes fixture=match row=15,15,6,1"));
    CHECK(contains(text.out, "PASS (4 orders checked)\n"));

    const CliRun json = run({"bessel-check", "--p-max", "5", "--format", "json"});
    CHECK(json.code == 0);
    CHECK(contains(json.out, "\"row\":[\"15\",\"15\",\"6\",\"1\"]"));
    CHECK(contains(json.out, "\"fixture_checked\":false"));  // p=5 has no published row
    CHECK(contains(json.out, "\"pass\":true"));
}
