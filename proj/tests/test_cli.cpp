#include "singode/cli.hpp"
#include "singode/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace singode;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "singode");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string problem(const std::string& name) { return std::string(SINGODE_PROBLEM_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "singode_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("analyze exit codes follow the verdict") {
    const Run b = run({"analyze", problem("bessel_m2.ode")});
    CHECK(b.code == kExitConditional);
    const Json j = Json::parse(b.out);
    CHECK(j["verdict"] == "CONDITIONAL_ON_FLATNESS");
    CHECK(j["flatness_bound_M"] == 9);
    CHECK(std::fabs(j["C_n"].get<double>() - 4.0) <= 1e-3);

    CHECK(run({"analyze", problem("cauchy_euler_03.ode")}).code == kExitOk);
    const Run a4 = run({"analyze", problem("cauchy_euler_a0_4.ode")});
    CHECK(a4.code == kExitConditional);
    CHECK(Json::parse(a4.out)["flatness_bound_M"] == 9);
    CHECK(run({"analyze", problem("example4.ode")}).code == kExitOk);

    const Run missing = run({"analyze", problem("missing.ode")});
    CHECK(missing.code == kExitError);
    CHECK(missing.err.find("missing.ode") != std::string::npos);
}

TEST_CASE("analyze on a diverging coefficient is inconclusive") {
    const fs::path f = scratch() / "diverging.ode";
    std::ofstream(f) << "order = 2\na1 = \"1/x^2\"\na0 = \"0\"\n";
    CHECK(run({"analyze", f.string()}).code == kExitInconclusive);
}

TEST_CASE("analyze writes the JSON report and honors grid flags") {
    const fs::path out = scratch() / "report.json";
    const Run r = run({"analyze", problem("bessel_m3.ode"), "--json", out.string(), "--samples", "32", "--x-min",
                       "1e-6"});
    CHECK(r.code == kExitConditional);
    CHECK(r.out.find("verdict: CONDITIONAL_ON_FLATNESS") != std::string::npos);
    const Json j = Json::parse(slurp(out));
    CHECK(j["weights"][0]["samples"].size() == 64);
    CHECK(j["flatness_bound_M"] == 19);
    // identical inputs, identical bytes
    const fs::path again = scratch() / "report2.json";
    run({"analyze", problem("bessel_m3.ode"), "--json", again.string(), "--samples", "32", "--x-min", "1e-6"});
    CHECK(slurp(out) == slurp(again));
}

TEST_CASE("precision flag") {
    const Run r = run({"--precision", "128", "analyze", problem("example4.ode")});
    CHECK(r.code == kExitOk);
    CHECK(run({"--precision", "5", "analyze", problem("example4.ode")}).code == kExitError);
}

TEST_CASE("command-line validation") {
    CHECK(run({}).code == kExitError);
    CHECK(run({"analyze"}).code == kExitError);
    CHECK(run({"analyze", problem("bessel_m2.ode"), "--frobnicate"}).code == kExitError);
    CHECK(run({"frobnicate"}).code == kExitError);
    CHECK(run({"series", "bessel", "--nu", "2", "demo", "bessel"}).code == kExitError);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("series") {
    const Run t = run({"series", "bessel", "--nu", "2", "--terms", "3"});
    CHECK(t.code == 0);
    CHECK(t.out == "x^2 * (1/8 - 1/96*x^2 + 1/3072*x^4)\n");
    CHECK(run({"series", "bessel", "--nu", "0", "--terms", "1"}).out == "1\n");
    const Run j = run({"series", "bessel", "--nu", "2", "--terms", "2", "--format", "json"});
    CHECK(Json::parse(j.out)["coefficients"].dump() == R"([[2,"1","8"],[4,"-1","96"]])");
    CHECK(run({"series", "bessel", "--nu", "-1"}).code == kExitError);
    CHECK(run({"series", "bessel", "--nu", "2", "--terms", "0"}).code == kExitError);
    CHECK(run({"series", "legendre", "--nu", "2"}).code == kExitError);
}

TEST_CASE("verify-bound") {
    const Run r3 = run({"verify-bound", "--function", "x^3", "--n", "2"});
    CHECK(r3.code == 0);
    CHECK(r3.out.find("N: 3\n") != std::string::npos);
    CHECK(r3.out.find("C exact: 3/2\n") != std::string::npos);
    CHECK(r3.out.find("bound B_n*C + n - 1: 4 ") != std::string::npos);
    CHECK(r3.out.find("PASS") != std::string::npos);
    const Run r1 = run({"verify-bound", "--function", "x^1", "--n", "2"});
    CHECK(r1.out.find("C_min: 0 ") != std::string::npos);
    CHECK(r1.out.find("bound B_n*C + n - 1: 1 ") != std::string::npos);
    const Run r9 = run({"verify-bound", "--function", "x^9", "--n", "3"});
    CHECK(r9.code == 0);
    CHECK(r9.out.find("C exact: 252/41") != std::string::npos);
    CHECK(run({"verify-bound", "--function", "ln(x)", "--n", "2"}).code == kExitError);
    CHECK(run({"verify-bound", "--function", "x^", "--n", "2"}).code == kExitError);
}

TEST_CASE("scan") {
    const fs::path csv = scratch() / "scan.csv";
    const Run r = run({"scan", "--function", "x^3", "--n", "2", "--csv", csv.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("C_min: 1.5") != std::string::npos);
    std::istringstream in(slurp(csv));
    const CsvTable t = read_csv(in);
    CHECK(t.header == std::vector<std::string>{"x", "ratio"});
    CHECK(t.rows.size() == 128);
    CHECK(run({"scan", "--reference", "bessel", "--param", "3", "--n", "2"}).code == 0);
    CHECK(run({"scan", "--n", "2"}).code == kExitError);
    CHECK(run({"scan", "--function", "x", "--reference", "bessel", "--n", "2"}).code == kExitError);
}

TEST_CASE("demo artifacts") {
    const fs::path csv = scratch() / "bessel.csv";
    const fs::path json = scratch() / "bessel.json";
    const Run r = run({"demo", "bessel", "--param", "2", "--csv", csv.string(), "--json", json.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("zero through x^8") != std::string::npos);
    CHECK(r.out.find("non-uniqueness demonstrated") != std::string::npos);
    CHECK(Json::parse(slurp(json))["passed"] == true);
    std::istringstream in(slurp(csv));
    CHECK(read_csv(in).rows.size() == 201);

    CHECK(run({"demo", "example4"}).code == 0);
    CHECK(run({"demo", "cauchy-euler", "--param", "0.3"}).out.find("UNIQUE_NEAR_ZERO") != std::string::npos);
    CHECK(run({"demo", "bessel", "--param", "2.5"}).code == kExitError);
    CHECK(run({"demo", "example4", "--param", "2"}).code == kExitError);
    CHECK(run({"demo", "nope"}).code == kExitError);
}
