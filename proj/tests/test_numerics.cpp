#include "singode/criteria.hpp"
#include "singode/demos.hpp"
#include "singode/error.hpp"
#include "singode/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace singode;

namespace {

const double kAlpha = 1.0 / (2.0 * std::numbers::e);

JetFunction monomial_jet(int N) {
    return [N](double x, int count) {
        std::vector<double> d;
        double c = 1.0;
        for (int k = 0; k < count; ++k) {
            d.push_back(k > N ? 0.0 : c * std::pow(x, N - k));
            c *= N - k;
        }
        return d;
    };
}

}  // namespace

TEST_CASE("geometric grid") {
    const SampleGrid g = default_grid();
    CHECK(g.magnitudes.size() == 64);
    CHECK(g.size() == 128);
    CHECK(g.points().size() == 128);
    CHECK(g.magnitudes.front() == 1e-1);
    CHECK(g.magnitudes.back() == doctest::Approx(1e-8).epsilon(1e-14));
    for (std::size_t i = 1; i < g.magnitudes.size(); ++i)
        CHECK(g.magnitudes[i] / g.magnitudes[i - 1] == doctest::Approx(g.ratio).epsilon(1e-13));
    CHECK(g.points()[0] == -g.points()[1]);
    CHECK_THROWS_AS(geometric_grid(1, 1, 16), RangeError);
    CHECK_THROWS_AS(geometric_grid(1, 2, 16), RangeError);
    CHECK_THROWS_AS(geometric_grid(1, 0.1, 15), RangeError);
}

TEST_CASE("integrate Bessel m=2 against its series") {
    const OdeProblem p = load_problem(bessel_problem_text(2));
    const RationalSeries y2 = bessel_series(2, 40);
    const auto start = evaluate_derivatives(y2, 1.0, 2);
    IntegrateOptions opt;
    opt.rel_tol = 1e-13;
    const Trajectory t = integrate(p, InitialData{1.0, start}, 0.05, opt);
    REQUIRE(t.status == TrajectoryStatus::Completed);
    CHECK(t.nodes.back().x == 0.05);
    double worst = 0;
    for (const auto& node : t.nodes) {
        const double ref = evaluate_series(y2, node.x);
        worst = std::max(worst, std::fabs(node.y[0] - ref) / std::fabs(ref));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("integrate the power-sine equation against the closed form") {
    const OdeProblem p = load_problem(example4_problem_text());
    const double s1 = std::sin(1.0), c1 = std::cos(1.0);
    const Trajectory t = integrate(p, InitialData{1.0, {s1, kAlpha * s1 + c1}}, 0.01);
    REQUIRE(t.status == TrajectoryStatus::Completed);
    double worst = 0;
    for (const auto& node : t.nodes) {
        const double ref = std::pow(node.x, kAlpha) * std::sin(node.x);
        worst = std::max(worst, std::fabs(node.y[0] - ref) / std::fabs(ref));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("integrate from zero data stays zero, on either side of 0") {
    const OdeProblem p = load_problem(bessel_problem_text(3));
    for (double sign : {1.0, -1.0}) {
        const Trajectory t = integrate(p, InitialData{sign * 0.9, {0.0, 0.0}}, sign * 0.01);
        REQUIRE(t.status == TrajectoryStatus::Completed);
        for (const auto& node : t.nodes) {
            CHECK(node.y[0] == 0.0);
            CHECK(node.y[1] == 0.0);
        }
    }
}

TEST_CASE("integrate rejects bad endpoints and reports blowup") {
    const OdeProblem p = load_problem(bessel_problem_text(2));
    CHECK_THROWS_AS(integrate(p, InitialData{1.0, {1.0, 0.0}}, -0.5), RangeError);
    CHECK_THROWS_AS(integrate(p, InitialData{1.0, {1.0, 0.0}}, 0.0), RangeError);
    CHECK_THROWS_AS(integrate(p, InitialData{1.0, {1.0}}, 0.5), RangeError);
    // the second solution behaves like x^-2; a small ceiling trips before 1e-8
    IntegrateOptions opt;
    opt.blowup_ceiling = 1e6;
    const Trajectory t = integrate(p, InitialData{1.0, {1.0, 0.0}}, 1e-8, opt);
    CHECK(t.status == TrajectoryStatus::Blowup);
    CHECK(t.nodes.back().x > 1e-8);
}

TEST_CASE("property: integration is scale equivariant") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0), c(0.1, 10.0);
    const OdeProblem p = load_problem(cauchy_euler_problem_text(0.3, -0.2));
    for (int i = 0; i < 20; ++i) {
        const double y0 = u(rng), y1 = u(rng), scale = (rng() & 1) ? 2.0 : c(rng);
        const Trajectory a = integrate(p, InitialData{1.0, {y0, y1}}, 0.02);
        const Trajectory b = integrate(p, InitialData{1.0, {scale * y0, scale * y1}}, 0.02);
        REQUIRE(a.status == TrajectoryStatus::Completed);
        REQUIRE(b.status == TrajectoryStatus::Completed);
        // compare at the end point, which both reach exactly
        for (int k = 0; k < 2; ++k) {
            const double ref = scale * a.nodes.back().y[k];
            CHECK(std::fabs(b.nodes.back().y[k] - ref) <= 1e-10 * std::max(std::fabs(ref), 1.0));
        }
    }
}

TEST_CASE("vanishing slope") {
    const auto cube = sample_window([](double x) { return x * x * x; });
    CHECK(vanishing_slope(cube).slope == doctest::Approx(3.0).epsilon(1e-6));
    for (double ratio_lo : {1e-6, 1e-5, 1e-3}) {
        for (int count : {8, 17, 50}) {
            const auto s = sample_window([](double x) { return 2.5 * std::pow(x, 4.5); }, ratio_lo, 1e-1, count);
            CHECK(std::fabs(vanishing_slope(s).slope - 4.5) <= 1e-6);
        }
    }
    const auto ps = sample_window([](double x) { return std::pow(x, kAlpha) * std::sin(x); });
    CHECK(std::fabs(vanishing_slope(ps).slope - (1 + kAlpha)) <= 0.01);
    const ReferenceSolution b = reference_solution(ReferenceKind::Bessel, 2);
    CHECK(std::fabs(vanishing_slope(sample_window([&](double x) { return b.value(x); })).slope - 2.0) <= 0.01);
    std::vector<std::pair<double, double>> few(7, {0.1, 1.0});
    CHECK_THROWS_AS(vanishing_slope(few), RangeError);
    std::vector<std::pair<double, double>> flat(8, {0.1, 1.0});
    CHECK_THROWS_AS(vanishing_slope(flat), RangeError);
    auto zero = cube;
    zero[3].second = 0.0;
    CHECK_THROWS_AS(vanishing_slope(zero), RangeError);
}

TEST_CASE("minimal C scan") {
    const auto s = minimal_c_scan(monomial_jet(3), 2, default_grid());
    CHECK(s.ratios.size() == 128);
    for (const auto& [x, r] : s.ratios) CHECK(r == doctest::Approx(1.5).epsilon(1e-13));
    for (int n = 2; n <= 5; ++n) CHECK(minimal_c_scan(monomial_jet(n - 1), n, default_grid()).c_min == 0.0);

    // Bessel y_2: |f''| <= |f'|/|x| + |1 - 4/x^2||f| <= 4 (|f'|/|x| + |f|/x^2) + |f| on (0, 0.5]
    const ReferenceSolution b = reference_solution(ReferenceKind::Bessel, 2);
    const auto bs = minimal_c_scan(b.jet(), 2, geometric_grid(0.5, 1e-6, 64));
    CHECK(bs.c_min <= 5.0 + 1e-9);
    CHECK(bs.c_min > 0.0);

    const JetFunction dead = [](double, int count) { return std::vector<double>(static_cast<std::size_t>(count), 0.0); };
    CHECK_THROWS_AS(minimal_c_scan(dead, 2, default_grid()), RangeError);
}

TEST_CASE("property: monomial bound N <= B_n C_min + n - 1") {
    for (int n = 2; n <= 4; ++n) {
        for (int N = n - 1; N <= 12; ++N) {
            const auto scan = minimal_c_scan(monomial_jet(N), n, default_grid());
            const Rational exact = monomial_c(N, n);
            CHECK(std::fabs(scan.c_min - to_double(exact)) <= 1e-12 * std::max(1.0, to_double(exact)));
            const Rational bound = b_constant_exact(n) * exact + (n - 1);
            CHECK(Rational(N) <= bound);
            if (N == n - 1) CHECK(Rational(N) == bound);
        }
    }
}

TEST_CASE("reference solutions") {
    const ReferenceSolution e4 = reference_solution(ReferenceKind::Example4, kAlpha);
    CHECK(std::fabs(e4.value(std::numbers::pi)) <= 1e-15);
    CHECK(e4.value(-0.5) == e4.value(0.5));
    CHECK(e4.derivatives(-0.5, 2)[1] == -e4.derivatives(0.5, 2)[1]);
    CHECK(e4.value(0.0) == 0.0);
    CHECK_THROWS_AS(e4.derivatives(0.0, 3), RangeError);
    CHECK_THROWS_AS(reference_solution(ReferenceKind::Example4, 1.5), RangeError);
    CHECK_THROWS_AS(reference_solution(ReferenceKind::Bessel, 1), RangeError);
    CHECK_THROWS_AS(reference_solution(ReferenceKind::Bessel, 2.5), RangeError);

    const ReferenceSolution b = reference_solution(ReferenceKind::Bessel, 2);
    CHECK(std::fabs(b.value(0.3) - evaluate_series(bessel_series(2, 16), 0.3)) <= 1e-12);
    // J_2(1) from standard tables
    CHECK(b.value(1.0) == doctest::Approx(0.11490348493190048).epsilon(1e-15));
}

TEST_CASE("property: finite differences agree with the analytic derivative") {
    const ReferenceSolution e4 = reference_solution(ReferenceKind::Example4, kAlpha);
    const double h = 1e-3;
    for (int i = 0; i <= 90; ++i) {
        const double x = 0.1 + 0.01 * i;
        const double fd = (-e4.value(x + 2 * h) + 8 * e4.value(x + h) - 8 * e4.value(x - h) + e4.value(x - 2 * h)) / (12 * h);
        CHECK(std::fabs(fd - e4.derivatives(x, 2)[1]) <= 1e-8);
    }
}
