#include "singode/criteria.hpp"
#include "singode/demos.hpp"
#include "singode/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace singode;

namespace {

// |c| x^-p in the problem-file language
std::string laurent(double c, int p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g/x^%d", c, p);
    return buf;
}

OdeProblem constant_weights(int n, const std::vector<double>& c, const std::vector<int>& p) {
    std::vector<CoefficientSpec> coeffs;
    for (int k = 0; k < n; ++k) coeffs.push_back({expr::parse(laurent(c[k], p[k])), std::nullopt});
    return OdeProblem(n, std::move(coeffs), 1.0, "laurent");
}

}  // namespace

TEST_CASE("B_n examples") {
    CHECK(b_constant_exact(1) == 1);
    CHECK(b_constant_exact(2) == 2);
    CHECK(b_constant_exact(4) == Rational(8, 3));
    CHECK(b_constant(4) == doctest::Approx(2.6666666666666667));
    CHECK(b_constant(30) > 2.7182818);
    // B_30 rounds to the double nearest e; the strict inequality needs exact arithmetic
    CHECK(b_constant_exact(30) < euler_enclosure().lo);
    CHECK_THROWS_AS(b_constant_exact(0), RangeError);
}

TEST_CASE("property: B_n increases, stays below e, and B_n/e + n - 1 < n") {
    const auto& e = euler_enclosure();
    CHECK(e.lo < e.hi);
    CHECK(e.hi - e.lo < Rational(1, BigInt("100000000000000000000000000000000000000000000000000")));
    Rational prev = 0;
    for (int n = 1; n <= 200; ++n) {
        const Rational b = b_constant_exact(n);
        CHECK(b > prev);
        CHECK(b < e.lo);
        // B_n / e < 1 <=> B_n < e
        if (n >= 2) CHECK(b / e.lo + (n - 1) < n);
        prev = b;
    }
}

TEST_CASE("vanishing order bound") {
    CHECK(vanishing_order_bound(1.0 / std::numbers::e, 2) == 1);
    CHECK(vanishing_order_bound(0.0, 5) == 4);
    CHECK(vanishing_order_bound(4.0, 2) == 9);
    for (int n = 1; n <= 40; ++n) CHECK(vanishing_order_bound(0.0, n) == n - 1);
    CHECK_THROWS_AS(vanishing_order_bound(-1.0, 2), RangeError);
    CHECK_THROWS_AS(vanishing_order_bound(INFINITY, 2), RangeError);
}

TEST_CASE("property: the bound is nondecreasing in C") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int n = 2; n <= 8; ++n) {
        std::vector<double> cs;
        for (int i = 0; i < 200; ++i) cs.push_back(u(rng));
        std::sort(cs.begin(), cs.end());
        long prev = -1;
        for (double c : cs) {
            const long m = vanishing_order_bound(c, n);
            CHECK(m >= prev);
            prev = m;
        }
    }
}

TEST_CASE("exact threshold predicates") {
    const double inv_e = 1.0 / std::numbers::e;
    CHECK(within_euler_bound(inv_e, 0.0) == (exact_rational(inv_e) * euler_enclosure().hi <= 1));
    CHECK(within_euler_bound(0.36788, 1e-6));
    CHECK_FALSE(within_euler_bound(0.36788, 1e-9));
    CHECK(within_relaxed_bound(0.49, 2, 0.0));
    CHECK_FALSE(within_relaxed_bound(0.5, 2, 0.0));
}

TEST_CASE("property: flag nesting with zero tolerances") {
    // c <= 0 implies c <= 1/e implies c < 1/B_n, since 1/e < 1/B_n for every n
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 0.6);
    for (int i = 0; i < 2000; ++i) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const double c = (i % 10 == 0) ? 0.0 : u(rng);
        const bool cor2 = c <= 0.0;
        const bool thm = within_euler_bound(c, 0.0);
        const bool relaxed = within_relaxed_bound(c, n, 0.0);
        if (cor2) CHECK(thm);
        if (thm) CHECK(relaxed);
    }
    // and on whole reports
    Tolerances zero{0.0, 0.0, 1e-6};
    for (double c : {0.0, 0.1, 0.3, 0.36, 0.4, 0.45, 0.55}) {
        const auto r = check_uniqueness(constant_weights(2, {c, c}, {2, 1}), default_grid(), zero);
        if (r.corollary2_satisfied) CHECK(r.theorem1_satisfied);
        if (r.theorem1_satisfied) CHECK(r.relaxed_satisfied);
    }
}

TEST_CASE("weight estimates") {
    const OdeProblem bessel = load_problem(bessel_problem_text(2));
    const auto c0 = estimate_weight(bessel, 0, default_grid());
    CHECK(std::fabs(c0.estimate - 4.0) <= 1e-3);
    CHECK(c0.converged);
    CHECK(c0.samples.size() == 128);

    const OdeProblem ps = load_problem(example4_problem_text());
    CHECK(std::fabs(estimate_weight(ps, 1, default_grid()).estimate - 1 / std::numbers::e) <= 1e-3);
    CHECK(std::fabs(estimate_weight(ps, 0, default_grid()).estimate - 0.217773) <= 1e-3);

    const OdeProblem bounded = load_problem("order = 2\na1 = \"0\"\na0 = \"sin(x)\"\n");
    const auto w = estimate_weight(bounded, 0, default_grid());
    CHECK(w.converged);
    CHECK(w.estimate <= 1e-9);
}

TEST_CASE("property: Laurent weights converge to |c| or 0") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            for (int k = 0; k < n; ++k) {
                const double c = u(rng);
                for (int p = 0; p <= n - k; ++p) {
                    std::vector<double> cs(static_cast<std::size_t>(n), 1.0);
                    std::vector<int> ps(static_cast<std::size_t>(n), 0);
                    cs[static_cast<std::size_t>(k)] = c;
                    ps[static_cast<std::size_t>(k)] = p;
                    const auto w = estimate_weight(constant_weights(n, cs, ps), k, default_grid());
                    INFO("n=" << n << " k=" << k << " p=" << p << " c=" << c);
                    CHECK(w.converged);
                    const double expected = p == n - k ? std::fabs(c) : 0.0;
                    CHECK(std::fabs(w.estimate - expected) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("oscillating and diverging coefficients") {
    const OdeProblem osc = load_problem("order = 2\na1 = \"0\"\na0 = \"(1 + 0.5*sin(1/x))/x^2\"\n");
    const auto w = estimate_weight(osc, 0, default_grid());
    CHECK(w.behavior == TailBehavior::Oscillating);
    CHECK(w.estimate <= 1.5);
    CHECK(w.estimate > 1.4);

    const OdeProblem div = load_problem("order = 2\na1 = \"1/x^2\"\na0 = \"0\"\n");
    const auto r = check_uniqueness(div, default_grid());
    CHECK(r.weights[1].behavior == TailBehavior::Diverging);
    CHECK(r.verdict == Verdict::Inconclusive);
    CHECK_FALSE(r.theorem1_satisfied);
    CHECK_FALSE(r.corollary3_satisfied);
}

TEST_CASE("skipped samples are recorded") {
    // ln(x) fails on the negative side only
    const OdeProblem p = load_problem("order = 2\na1 = \"0\"\na0 = \"ln(x)\"\n");
    const auto w = estimate_weight(p, 0, default_grid());
    CHECK(w.skipped.size() == 64);
    CHECK(w.samples.size() == 64);
    CHECK(w.converged);
    const OdeProblem none = load_problem("order = 2\na1 = \"0\"\na0 = \"ln(-x^2)\"\n");
    CHECK_THROWS_AS(estimate_weight(none, 0, default_grid()), Error);
}

TEST_CASE("check_uniqueness examples") {
    const auto ce = check_uniqueness(load_problem(cauchy_euler_problem_text(0.3, 0.3)), default_grid());
    CHECK(ce.theorem1_satisfied);
    CHECK(ce.relaxed_satisfied);
    CHECK_FALSE(ce.corollary2_satisfied);
    CHECK(ce.verdict == Verdict::UniqueNearZero);

    const auto b = check_uniqueness(load_problem(bessel_problem_text(2)), default_grid());
    CHECK_FALSE(b.theorem1_satisfied);
    CHECK(std::fabs(b.C_n - 4.0) <= 1e-3);
    REQUIRE(b.flatness_bound_M);
    CHECK(*b.flatness_bound_M == 9);
    CHECK(b.verdict == Verdict::ConditionalOnFlatness);
    CHECK(b.corollary3_satisfied == false);

    const auto e4 = check_uniqueness(load_problem(example4_problem_text()), default_grid());
    CHECK(e4.theorem1_satisfied);
    CHECK(e4.verdict == Verdict::UniqueNearZero);

    const auto bounded = check_uniqueness(load_problem("order = 2\na1 = \"cos(x)\"\na0 = \"exp(x)\"\n"), default_grid());
    CHECK(bounded.corollary2_satisfied);
    CHECK(bounded.corollary3_satisfied);
    CHECK(bounded.C_n <= 1e-9);
    CHECK(*bounded.flatness_bound_M == 1);

    CHECK(c_constant(b.weights) == b.C_n);
    CHECK(c_constant({}) == 0.0);
}

TEST_CASE("extended precision sampling agrees") {
    const OdeProblem p = load_problem(example4_problem_text());
    const auto lo = estimate_weight(p, 0, default_grid());
    const auto hi = estimate_weight(p, 0, default_grid(), Precision{200});
    CHECK(std::fabs(lo.estimate - hi.estimate) <= 1e-12);
}
