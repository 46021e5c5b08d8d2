#include "singode/demos.hpp"

#include "singode/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace singode {

namespace {

// Shortest %g rendering that reads back to the same double.
std::string shortest_double(double v) {
    char buf[40];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace

std::string bessel_problem_text(int m) {
    if (m < 0) throw RangeError("bessel_problem_text: m must be nonnegative");
    std::ostringstream os;
    os << "# Bessel equation of order " << m << "\n"
       << "label = Bessel m=" << m << "\n"
       << "order = 2\n"
       << "interval = 1\n"
       << "a1 = \"1/x\"\n"
       << "a0 = \"1 - " << m * m << "/x^2\"\n";
    return os.str();
}

std::string example4_problem_text(std::optional<double> alpha) {
    std::string a = "(1/(2*e))";
    std::string label = "power-sine alpha=1/(2e)";
    if (alpha) {
        if (!(*alpha > 0 && *alpha < 1)) throw RangeError("power-sine example needs alpha in (0, 1)");
        a = shortest_double(*alpha);
        label = "power-sine alpha=" + a;
    }
    std::ostringstream os;
    os << "# y = |x|^alpha sin|x| solves this with y(0) = y'(0) = 0\n"
       << "label = " << label << "\n"
       << "order = 2\n"
       << "interval = 1\n"
       << "a1 = \"-(2*" << a << ")/x\"\n"
       << "a0 = \"1 + (" << a << "^2 + " << a << ")/x^2\"\n";
    return os.str();
}

std::string cauchy_euler_problem_text(double a1, double a0) {
    std::ostringstream os;
    const std::string s1 = shortest_double(a1), s0 = shortest_double(a0);
    os << "# Cauchy-Euler: x^2 y'' + a1 x y' + a0 y = 0\n"
       << "label = Cauchy-Euler a1=" << s1 << " a0=" << s0 << "\n"
       << "order = 2\n"
       << "interval = 1\n"
       << "a1 = \"" << s1 << "/x\"\n"
       << "a0 = \"" << s0 << "/x^2\"\n";
    return os.str();
}

std::vector<RationalSeries> bessel_laurent_coefficients(int m) {
    // a0 = 1 - m^2 x^-2, a1 = x^-1
    RationalSeries a0(Rational(-2), {Rational(-m * m), Rational(0), Rational(1)}, true);
    RationalSeries a1 = RationalSeries::monomial(Rational(1), Rational(-1));
    return {a0, a1};
}

std::vector<RealSeries> example4_laurent_coefficients(const BigReal& alpha) {
    RealSeries a0(BigReal(-2), {BigReal(alpha * alpha + alpha), BigReal(0), BigReal(1)}, true);
    RealSeries a1 = RealSeries::monomial(BigReal(-2 * alpha), BigReal(-1));
    return {a0, a1};
}

RealSeries example4_solution_series(const BigReal& alpha, int truncation_order) {
    std::vector<BigReal> c(static_cast<std::size_t>(truncation_order) + 1, BigReal(0));
    // sin x / x = sum_j (-1)^j x^{2j} / (2j+1)!
    BigReal inv_fact = 1;
    for (int j = 0; 2 * j <= truncation_order; ++j) {
        if (j > 0) inv_fact /= BigReal((2 * j) * (2 * j + 1));
        c[static_cast<std::size_t>(2 * j)] = j % 2 == 0 ? inv_fact : BigReal(-inv_fact);
    }
    return RealSeries(BigReal(alpha + 1), std::move(c), false);
}

bool DemoResult::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

namespace {

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

// Portable uniform (0,1) stream: 53 random bits from mt19937_64.
class UnitStream {
public:
    explicit UnitStream(std::uint64_t seed) : engine_(seed) {}
    double next() {
        for (;;) {
            const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
            if (u > 0) return u;
        }
    }

private:
    std::mt19937_64 engine_;
};

constexpr int kSeriesDemoTruncation = 8;

double max_relative_deviation(const Trajectory& traj, const std::function<double(double)>& exact,
                              const std::function<double(double)>& scale) {
    double worst = 0.0;
    for (const auto& node : traj.nodes) {
        const double ref = exact(node.x);
        worst = std::max(worst, std::fabs(node.y.front() - ref) / scale(node.x));
    }
    return worst;
}

IntegrateOptions cross_check_options() {
    IntegrateOptions opt;
    opt.rel_tol = 1e-15;
    opt.abs_tol = 1e-30;
    return opt;
}

void add_solution_rows(DemoResult& r, const std::function<std::vector<double>(double)>& jet, double lo, double hi,
                       int count) {
    r.csv_header = {"x", "f", "f1"};
    for (int i = 0; i < count; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(count - 1);
        const auto d = jet(x);
        r.csv_rows.push_back({x, d[0], d[1]});
    }
}

}  // namespace

DemoResult run_example4_demo(std::optional<double> alpha_opt, const DemoOptions& options) {
    const double alpha = alpha_opt.value_or(1.0 / (2.0 * std::numbers::e));
    if (!(alpha > 0 && alpha < 1)) throw RangeError("example4: alpha must lie in (0, 1)");
    DemoResult r;
    r.name = "example4";
    r.parameter = alpha;
    const OdeProblem problem = load_problem(example4_problem_text(alpha_opt));
    const ReferenceSolution ref = reference_solution(ReferenceKind::Example4, alpha);

    {
        ScopedPrecision scope(Precision{256});
        const BigReal a = alpha_opt ? BigReal(*alpha_opt) : BigReal(1) / (2 * exp(BigReal(1)));
        const auto residual = ode_residual(example4_laurent_coefficients(a), example4_solution_series(a, 24));
        r.checks.push_back({"series residual zero (256-bit)",
                            "through x^" + fmt(residual.certified_through->convert_to<double>(), 8),
                            residual.residual.is_zero() && !residual.truncation_insufficient});
    }

    UnitStream stream(20090601);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double x = stream.next();
        const auto d = ref.derivatives(x, 3);
        const double res = d[2] + problem.coefficient_at(1, x) * d[1] + problem.coefficient_at(0, x) * d[0];
        worst = std::max(worst, std::fabs(res));
    }
    r.checks.push_back({"closed-form residual, 200 points in (0,1)", "max " + fmt(worst, 3), worst <= 1e-10});

    r.report = check_uniqueness(problem, options.grid, Tolerances{}, options.precision);
    const double c1 = r.report.weights[1].estimate;
    const double c0 = r.report.weights[0].estimate;
    r.checks.push_back({"weight c1 = 2 alpha", fmt(c1, 9), std::fabs(c1 - 2 * alpha) <= 1e-3});
    r.checks.push_back({"weight c0 = alpha^2 + alpha", fmt(c0, 9), std::fabs(c0 - (alpha * alpha + alpha)) <= 1e-3});
    const bool expect_theorem1 = within_euler_bound(std::max(2 * alpha, alpha * alpha + alpha), 1e-9);
    r.checks.push_back({"criterion c_k <= 1/e", r.report.theorem1_satisfied ? "satisfied" : "violated",
                        r.report.theorem1_satisfied == expect_theorem1});

    const auto slope = vanishing_slope(sample_window([&](double x) { return ref.value(x); }));
    r.checks.push_back({"log-log slope = 1 + alpha", fmt(slope.slope, 7), std::fabs(slope.slope - (1 + alpha)) <= 0.01});
    const bool non_integer = std::fabs(slope.slope - std::round(slope.slope)) > 0.05;
    r.checks.push_back({"vanishing order non-integer", non_integer ? "yes" : "no", non_integer});
    const auto slope1 = vanishing_slope(sample_window([&](double x) { return ref.derivatives(x, 2)[1]; }));
    r.checks.push_back({"f' -> 0 at 0 (slope of f' = alpha)", fmt(slope1.slope, 7),
                        slope1.slope > 0 && std::fabs(slope1.slope - alpha) <= 0.01});

    const auto start = ref.derivatives(1.0, 2);
    const Trajectory traj = integrate(problem, InitialData{1.0, start}, 0.01, cross_check_options());
    const double dev = max_relative_deviation(
        traj, [&](double x) { return ref.value(x); }, [&](double x) { return std::fabs(ref.value(x)); });
    r.checks.push_back({"integrator vs closed form on [0.01, 1]", "max rel " + fmt(dev, 3),
                        traj.status == TrajectoryStatus::Completed && dev <= 1e-6});

    r.conclusion = r.report.theorem1_satisfied
                       ? "the 1/e criterion holds, yet |x|^alpha sin|x| is a nonzero solution with y(0)=y'(0)=0; "
                         "it is not C-infinity (vanishing order 1+alpha is not an integer), so uniqueness for "
                         "smooth solutions is not contradicted"
                       : "the 1/e criterion fails for this alpha; |x|^alpha sin|x| is a nonzero solution with "
                         "y(0)=y'(0)=0 of finite non-integer vanishing order";
    add_solution_rows(r, [&](double x) { return ref.derivatives(x, 2); }, -1.0, 1.0, 201);
    return r;
}

DemoResult run_bessel_demo(int m, const DemoOptions& options) {
    if (m < 2) throw RangeError("bessel: m must be an integer >= 2");
    DemoResult r;
    r.name = "bessel";
    r.parameter = m;
    const OdeProblem problem = load_problem(bessel_problem_text(m));
    const ReferenceSolution ref = reference_solution(ReferenceKind::Bessel, m);

    const RationalSeries series = bessel_series(m, kSeriesDemoTruncation);
    const auto residual = ode_residual(bessel_laurent_coefficients(m), series);
    r.checks.push_back({"series residual exact (rational)", "zero through x^" + to_string(*residual.certified_through),
                        residual.residual.is_zero() && !residual.truncation_insufficient});

    const auto lead = vanishing_order(series);
    Rational expected_lead = 1;
    for (int j = 2; j <= m; ++j) expected_lead /= j;
    expected_lead /= Rational(BigInt(1) << static_cast<unsigned>(m));
    r.checks.push_back({"vanishing order (N, a_N)", "(" + to_string(lead.exponent) + ", " + to_string(lead.coefficient) + ")",
                        lead.exponent == m && lead.coefficient == expected_lead});

    r.report = check_uniqueness(problem, options.grid, Tolerances{}, options.precision);
    const double c0 = r.report.weights[0].estimate;
    const double c1 = r.report.weights[1].estimate;
    r.checks.push_back({"weight c0 = m^2", fmt(c0, 9), std::fabs(c0 - m * m) <= 1e-3});
    r.checks.push_back({"weight c1 = 1", fmt(c1, 9), std::fabs(c1 - 1.0) <= 1e-3});
    r.checks.push_back({"criterion c_k <= 1/e", r.report.theorem1_satisfied ? "satisfied" : "violated",
                        !r.report.theorem1_satisfied});
    const long M = r.report.flatness_bound_M.value_or(-1);
    r.checks.push_back({"flatness condition fails: m <= M", "M = " + std::to_string(M), m <= M});

    const auto slope = vanishing_slope(sample_window([&](double x) { return ref.value(x); }));
    r.checks.push_back({"log-log slope = m", fmt(slope.slope, 7), std::fabs(slope.slope - m) <= 0.01});

    const auto start = ref.derivatives(1.0, 2);
    const Trajectory traj = integrate(problem, InitialData{1.0, start}, 0.05, cross_check_options());
    const double dev = max_relative_deviation(
        traj, [&](double x) { return ref.value(x); }, [&](double x) { return std::fabs(ref.value(x)); });
    r.checks.push_back({"integrator vs series on [0.05, 1]", "max rel " + fmt(dev, 3),
                        traj.status == TrajectoryStatus::Completed && dev <= 1e-6});

    r.conclusion = "the 1/e criterion is violated (c0 = m^2 > 1/e); y_m = x^m g(x) is smooth, nonzero, and flat to order "
                   "m-1 at 0: non-uniqueness demonstrated";
    add_solution_rows(r, [&](double x) { return ref.derivatives(x, 2); }, -1.0, 1.0, 201);
    return r;
}

DemoResult run_cauchy_euler_demo(double a, const DemoOptions& options) {
    if (!std::isfinite(a)) throw RangeError("cauchy-euler: parameter must be finite");
    DemoResult r;
    r.name = "cauchy-euler";
    r.parameter = a;
    const OdeProblem problem = load_problem(cauchy_euler_problem_text(a, a));

    const IndicialRoots roots = indicial_roots(2, {a, a});
    double worst = 0.0;
    double max_re = -INFINITY;
    for (const auto& root : roots.roots) {
        worst = std::max(worst, std::abs(evaluate_indicial(roots, root)));
        max_re = std::max(max_re, root.real());
    }
    std::ostringstream rs;
    for (std::size_t i = 0; i < roots.roots.size(); ++i)
        rs << (i ? ", " : "") << fmt(roots.roots[i].real(), 6) << (roots.roots[i].imag() < 0 ? " - " : " + ")
           << fmt(std::fabs(roots.roots[i].imag()), 6) << "i";
    r.checks.push_back({"indicial roots", rs.str(), worst <= 1e-12});
    r.checks.push_back({"max real part < n = 2", fmt(max_re, 6), max_re < 2});

    r.report = check_uniqueness(problem, options.grid, Tolerances{}, options.precision);
    const double c0 = r.report.weights[0].estimate, c1 = r.report.weights[1].estimate;
    r.checks.push_back({"weights c0 = c1 = |a|", fmt(c0, 9) + ", " + fmt(c1, 9),
                        std::fabs(c0 - std::fabs(a)) <= 1e-9 && std::fabs(c1 - std::fabs(a)) <= 1e-9});
    const Verdict expected = within_euler_bound(std::fabs(a), 1e-9) ? Verdict::UniqueNearZero
                                                                     : Verdict::ConditionalOnFlatness;
    r.checks.push_back({"verdict", to_string(r.report.verdict), r.report.verdict == expected});

    // real solution: x^p cos(q ln x) for complex roots p +- iq, else x^{r1}
    const auto lead = roots.roots.front();
    const double p = lead.real(), q = std::fabs(lead.imag());
    auto exact = [p, q](double x) { return std::pow(x, p) * std::cos(q * std::log(x)); };
    auto exact_d = [p, q](double x) {
        return std::pow(x, p - 1) * (p * std::cos(q * std::log(x)) - q * std::sin(q * std::log(x)));
    };
    const Trajectory traj = integrate(problem, InitialData{1.0, {1.0, p}}, 0.01, cross_check_options());
    const double dev =
        max_relative_deviation(traj, exact, [p](double x) { return std::pow(x, p); });
    r.checks.push_back({"integrator vs x^p cos(q ln x) on [0.01, 1]", "max rel " + fmt(dev, 3),
                        traj.status == TrajectoryStatus::Completed && dev <= 1e-6});

    r.conclusion = r.report.verdict == Verdict::UniqueNearZero
                       ? "all |a_k| < 1/e: no nonzero smooth solution is flat to order n-1 at 0 (UniqueNearZero)"
                       : "weights exceed 1/e: uniqueness needs flatness to order M";
    r.csv_header = {"x", "f", "f1"};
    for (int i = 1; i <= 200; ++i) {
        const double x = double(i) / 200.0;
        r.csv_rows.push_back({x, exact(x), exact_d(x)});
    }
    return r;
}

Json to_json(const DemoResult& result) {
    Json j;
    j["demo"] = result.name;
    j["parameter"] = result.parameter;
    j["passed"] = result.passed();
    Json checks = Json::array();
    for (const auto& c : result.checks) checks.push_back(Json{{"name", c.name}, {"value", c.value}, {"passed", c.passed}});
    j["checks"] = std::move(checks);
    j["conclusion"] = result.conclusion;
    j["report"] = to_json(result.report);
    return j;
}

std::string format_summary(const DemoResult& result) {
    std::size_t name_w = 5, value_w = 5;
    for (const auto& c : result.checks) {
        name_w = std::max(name_w, c.name.size());
        value_w = std::max(value_w, c.value.size());
    }
    std::ostringstream os;
    os << "demo " << result.name << " (parameter " << fmt(result.parameter, 10) << ")\n";
    os << std::left << std::setw(static_cast<int>(name_w)) << "check" << "  " << std::setw(static_cast<int>(value_w))
       << "value" << "  status\n";
    os << std::string(name_w + value_w + 10, '-') << "\n";
    for (const auto& c : result.checks)
        os << std::setw(static_cast<int>(name_w)) << c.name << "  " << std::setw(static_cast<int>(value_w)) << c.value
           << "  " << (c.passed ? "PASS" : "FAIL") << "\n";
    os << "verdict: " << to_string(result.report.verdict) << ", C_n = " << fmt(result.report.C_n, 9) << ", M = "
       << (result.report.flatness_bound_M ? std::to_string(*result.report.flatness_bound_M) : std::string("n/a"))
       << "\n";
    os << result.conclusion << "\n";
    os << (result.passed() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
    return os.str();
}

Rational monomial_c(long N, int n) {
    if (N < 0 || n < 1) throw RangeError("monomial_c: need N >= 0 and n >= 1");
    Rational falling = 1;
    Rational denominator = 0;
    for (int k = 0; k < n; ++k) {
        denominator += falling;
        falling *= Rational(N - k);
    }
    return falling / denominator;
}

BoundCheck verify_vanishing_bound(const expr::Expr& function, int n, const SampleGrid& grid) {
    if (n < 2) throw RangeError("verify-bound: n must be at least 2");
    BoundCheck out;
    out.function = expr::to_string(function);
    out.n = n;
    const RationalSeries series = series_from_expr(function, 60);
    const auto lead = vanishing_order(series);
    const auto N = SeriesScalar<Rational>::integer_value(lead.exponent);
    if (!N || *N < 0)
        throw RangeError("unsupported function class: vanishing order " + to_string(lead.exponent) +
                         " is not a nonnegative integer (function is not smooth at 0)");
    out.N = lead.exponent;
    out.leading_coefficient = lead.coefficient;

    const JetFunction jet = [&series](double x, int count) { return evaluate_derivatives(series, x, count); };
    out.scan = minimal_c_scan(jet, n, grid);
    out.c_min = out.scan.c_min;
    if (series.exact() && series.coeffs().size() == 1) out.c_exact = monomial_c(*N, n);

    const Rational C = out.c_exact ? *out.c_exact : exact_rational(out.c_min);
    out.bound = b_constant_exact(n) * C + Rational(n - 1);
    out.passed = out.N <= out.bound;

    try {
        out.slope = vanishing_slope(sample_window([&series](double x) { return evaluate_series(series, x); }));
    } catch (const RangeError&) {
        // f vanishes somewhere on the window; no slope estimate
    }
    return out;
}

}  // namespace singode
