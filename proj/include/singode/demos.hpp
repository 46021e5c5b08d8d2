#pragma once

#include "singode/criteria.hpp"
#include "singode/model.hpp"
#include "singode/numerics.hpp"
#include "singode/report.hpp"
#include "singode/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace singode {

// Built-in problem files ------------------------------------------------------

/// y'' + (1/x) y' + (1 - m^2/x^2) y = 0.
std::string bessel_problem_text(int m);
/// y'' - (2 alpha/x) y' + (1 + (alpha^2 + alpha)/x^2) y = 0; alpha = 1/(2e) when omitted.
std::string example4_problem_text(std::optional<double> alpha = std::nullopt);
/// x^2 y'' + a1 x y' + a0 y = 0 written as y'' + (a1/x) y' + (a0/x^2) y = 0.
std::string cauchy_euler_problem_text(double a1, double a0);

/// Exact Laurent coefficients {a0, a1} of the Bessel equation of order m.
std::vector<RationalSeries> bessel_laurent_coefficients(int m);
/// Laurent coefficients {a0, a1} of the |x|^alpha sin|x| equation at the current BigReal precision.
std::vector<RealSeries> example4_laurent_coefficients(const BigReal& alpha);
/// x^alpha sin x = x^{alpha+1} (1 - x^2/3! + ...) through x^{alpha+1+K}.
RealSeries example4_solution_series(const BigReal& alpha, int truncation_order);

// Reproduction pipelines --------------------------------------------------------

struct DemoCheck {
    std::string name;
    std::string value;
    bool passed = false;
};

struct DemoResult {
    std::string name;
    double parameter = 0.0;
    std::vector<DemoCheck> checks;
    CriteriaReport report;
    std::string conclusion;
    /// x, f, f' of the nonzero solution, for plotting.
    std::vector<std::string> csv_header;
    std::vector<std::vector<double>> csv_rows;

    bool passed() const;
};

struct DemoOptions {
    SampleGrid grid = default_grid();
    Precision precision{};
};

/// alpha in (0, 1); 1/(2e) when omitted.
DemoResult run_example4_demo(std::optional<double> alpha = std::nullopt, const DemoOptions& options = {});
/// integer m >= 2.
DemoResult run_bessel_demo(int m, const DemoOptions& options = {});
/// a1 = a0 = a.
DemoResult run_cauchy_euler_demo(double a, const DemoOptions& options = {});

Json to_json(const DemoResult& result);
/// Fixed-width pass/fail table.
std::string format_summary(const DemoResult& result);

// Vanishing-order bound check ----------------------------------------------------

struct BoundCheck {
    std::string function;
    int n = 0;
    /// Vanishing order N and leading coefficient a_N from the exact series.
    Rational N;
    Rational leading_coefficient;
    /// Supremum of the sampled ratios.
    double c_min = 0.0;
    /// Exact constant for a single monomial c x^N: N(N-1)...(N-n+1) / sum_{k<n} N(N-1)...(N-k+1).
    std::optional<Rational> c_exact;
    /// B_n C + n - 1 using c_exact when available.
    Rational bound;
    std::optional<SlopeEstimate> slope;
    MinimalCScan scan;
    bool passed = false;
};

/// Throws RangeError for functions outside the exact-series class or with a
/// non-integer vanishing order.
BoundCheck verify_vanishing_bound(const expr::Expr& function, int n, const SampleGrid& grid = default_grid());

/// N(N-1)...(N-n+1) / sum_{k<n} N(N-1)...(N-k+1) for f = x^N.
Rational monomial_c(long N, int n);

}  // namespace singode
