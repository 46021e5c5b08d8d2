#include "singode/demos.hpp"
#include "singode/error.hpp"
#include "singode/model.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

using namespace singode;

namespace {

const char* const kBessel = R"(# Bessel m = 2
order = 2
a1 = "1/x"
a0 = "1 - 4/x^2"
)";

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("load a Bessel problem") {
    const OdeProblem p = load_problem(kBessel);
    CHECK(p.order() == 2);
    CHECK(p.interval_radius() == 1.0);
    CHECK(p.label().empty());
    CHECK(p.coefficient_at(1, 0.5) == 2.0);
    CHECK(p.coefficient_at(0, 2.0) == 0.0);
    CHECK(p.weight_exponent(0) == 2);
    CHECK(p.weight_exponent(1) == 1);
    CHECK_THROWS_AS(p.coefficient_at(0, 0.0), RangeError);
    CHECK_THROWS_AS(p.coefficient_at(2, 1.0), RangeError);
}

TEST_CASE("load the decimal power-sine problem") {
    const OdeProblem p = load_problem(
        "order = 2\nlabel = \"alpha 0.18394\"\ninterval = 0.5\n"
        "a1 = \"-(2*0.18394)/x\"\na0 = \"1 + (0.18394^2+0.18394)/x^2\"\n");
    CHECK(p.label() == "alpha 0.18394");
    CHECK(p.interval_radius() == 0.5);
    CHECK(p.coefficient_at(1, 1.0) == doctest::Approx(-0.36788).epsilon(1e-15));
    CHECK(p.coefficient_at(0, 1.0) == doctest::Approx(1 + 0.18394 * 0.18394 + 0.18394).epsilon(1e-15));
}

TEST_CASE("Cauchy-Euler coefficient") {
    const OdeProblem p = load_problem("order = 2\na1 = \"0.3/x\"\na0 = \"0.3/x^2\"\n");
    CHECK(p.coefficient_at(1, 0.1) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("declared pole orders select the weight exponent") {
    const OdeProblem p = load_problem("order = 3\na2 = \"1\"\na1 = \"1/x\"\na0 = \"x\"\npole_order_a1 = 1\n");
    CHECK(p.weight_exponent(1) == 1);
    CHECK(p.weight_exponent(0) == 3);
    CHECK_THROWS_AS(load_problem("order = 2\na1 = \"1\"\na0 = \"1\"\npole_order_a1 = 2\n"), FormatError);
}

TEST_CASE("format errors report line numbers") {
    const auto line_of = [](const std::string& text) -> std::size_t {
        try {
            load_problem(text);
        } catch (const FormatError& e) {
            return e.line();
        }
        return 9999;
    };
    CHECK(line_of("order = 2\na1 = \"1/x\"\n") == 0);                      // count mismatch
    CHECK(line_of("a1 = \"1\"\na0 = \"1\"\n") == 0);                       // missing order
    CHECK(line_of("order = 2\n\na1 = \"1/x\"\nfoo = 3\n") == 4);           // unknown key
    CHECK(line_of("order = 2\na1 = \"1/x\"\na1 = \"x\"\na0 = \"1\"\n") == 3);  // duplicate
    CHECK(line_of("order = 2\na1 = 1/x\na0 = \"1\"\n") == 2);              // unquoted
    CHECK(line_of("order = 2\na1 = \"1/\"\na0 = \"1\"\n") == 2);           // forwarded syntax error
    CHECK(line_of("order = two\n") == 1);
    CHECK(line_of("order = 1\na0 = \"1\"\n") == 1);
    CHECK(line_of("order = 2\na2 = \"1\"\na1 = \"1\"\na0 = \"1\"\n") == 2);
    CHECK(line_of("order = 2\ninterval = -1\na1 = \"1\"\na0 = \"1\"\n") == 2);
    CHECK(line_of("order 2\n") == 1);
    CHECK_THROWS_AS(load_problem_file("/nonexistent/problem.ode"), FormatError);
}

TEST_CASE("constructor validation") {
    const auto one = CoefficientSpec{expr::parse("1"), std::nullopt};
    CHECK_THROWS_AS(OdeProblem(1, {one}, 1.0, ""), FormatError);
    CHECK_THROWS_AS(OdeProblem(2, {one}, 1.0, ""), FormatError);
    CHECK_THROWS_AS(OdeProblem(2, {one, one}, 0.0, ""), FormatError);
    CHECK_NOTHROW(OdeProblem(2, {one, one}, 1.0, ""));
}

TEST_CASE("first-order system") {
    const OdeProblem p = load_problem(kBessel);
    const FirstOrderSystem f = to_first_order_system(p);
    REQUIRE(f.dimension() == 2);
    const double y[2] = {0.1149034849319005, 0.2102436202376806};  // y_2(1), y_2'(1)
    double dy[2];
    f(1.0, y, dy);
    CHECK(dy[0] == y[1]);
    CHECK(dy[1] == doctest::Approx(-(1.0 / 1.0) * y[1] - (1.0 - 4.0) * y[0]).epsilon(1e-15));

    const double zero[2] = {0, 0};
    f(0.37, zero, dy);
    CHECK(dy[0] == 0.0);
    CHECK(dy[1] == 0.0);
}

TEST_CASE("first-order system on the closed-form power-sine solution") {
    const OdeProblem p = load_problem(example4_problem_text());
    const double a = 1.0 / (2.0 * std::numbers::e);
    const double s = std::sin(1.0), c = std::cos(1.0);
    // f = x^a sin x at x = 1
    const double y[2] = {s, a * s + c};
    const double f2 = a * (a - 1) * s + 2 * a * c - s;
    double dy[2];
    to_first_order_system(p)(1.0, y, dy);
    CHECK(std::fabs(dy[1] - f2) <= 1e-12);
}

TEST_CASE("property: linearity and reconstruction of y^(n)") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const OdeProblem p = load_problem("order = 3\na2 = \"sin(x)/x\"\na1 = \"0.3/x^2 + exp(x)\"\na0 = \"1/x^3 - x\"\n");
    const FirstOrderSystem f(p);
    for (int i = 0; i < 500; ++i) {
        double x = u(rng);
        if (std::fabs(x) < 1e-3) x = 0.5;
        const double c = u(rng);
        const double y[3] = {u(rng), u(rng), u(rng)};
        const double cy[3] = {c * y[0], c * y[1], c * y[2]};
        double dy[3], dcy[3];
        f(x, y, dy);
        f(x, cy, dcy);
        for (int j = 0; j < 3; ++j) {
            const double scale = std::max(1.0, std::fabs(c * dy[j]));
            CHECK(std::fabs(dcy[j] - c * dy[j]) <= 1e-13 * scale);
        }
        // same evaluation order as the system: k = 0 .. n-1
        double expected = 0.0;
        for (int k = 0; k < 3; ++k) expected += p.coefficient_at(k, x) * y[k];
        CHECK(dy[2] == -expected);
        CHECK(dy[0] == y[1]);
        CHECK(dy[1] == y[2]);
    }
}

TEST_CASE("shipped problem files match the built-in texts") {
    const std::string dir = SINGODE_PROBLEM_DIR;
    CHECK(read_file(dir + "/bessel_m2.ode") == bessel_problem_text(2));
    CHECK(read_file(dir + "/bessel_m3.ode") == bessel_problem_text(3));
    CHECK(read_file(dir + "/example4.ode") == example4_problem_text());
    CHECK(read_file(dir + "/cauchy_euler_03.ode") == cauchy_euler_problem_text(0.3, 0.3));
    CHECK(read_file(dir + "/cauchy_euler_a0_4.ode") == cauchy_euler_problem_text(0.3, 4.0));
    for (const char* name : {"bessel_m2", "bessel_m3", "example4", "cauchy_euler_03", "cauchy_euler_a0_4"})
        CHECK_NOTHROW(load_problem_file(dir + "/" + name + ".ode"));
}
