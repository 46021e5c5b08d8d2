#include "singode/numerics.hpp"

#include "singode/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace singode {

std::vector<double> SampleGrid::points() const {
    std::vector<double> out;
    out.reserve(size());
    for (double m : magnitudes) {
        out.push_back(m);
        out.push_back(-m);
    }
    return out;
}

SampleGrid geometric_grid(double x_max, double x_min, int count) {
    if (!(x_min > 0) || !(x_min < x_max) || !std::isfinite(x_max))
        throw RangeError("geometric_grid: need 0 < x_min < x_max");
    if (count < 16) throw RangeError("geometric_grid: need at least 16 points per sign");
    SampleGrid grid;
    grid.magnitudes.reserve(static_cast<std::size_t>(count));
    const double span = x_min / x_max;
    for (int j = 0; j < count; ++j) grid.magnitudes.push_back(x_max * std::pow(span, double(j) / double(count - 1)));
    grid.ratio = std::pow(span, 1.0 / double(count - 1));
    return grid;
}

SampleGrid default_grid() { return geometric_grid(1e-1, 1e-8, 64); }

std::string to_string(TrajectoryStatus status) {
    switch (status) {
        case TrajectoryStatus::Completed: return "completed";
        case TrajectoryStatus::Blowup: return "blowup";
        case TrajectoryStatus::StepUnderflow: return "step_underflow";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

namespace {

using Real = long double;

constexpr std::array<Real, 7> kC{0.0L, 1.0L / 5, 3.0L / 10, 4.0L / 5, 8.0L / 9, 1.0L, 1.0L};
constexpr Real kA[7][6] = {
    {},
    {1.0L / 5},
    {3.0L / 40, 9.0L / 40},
    {44.0L / 45, -56.0L / 15, 32.0L / 9},
    {19372.0L / 6561, -25360.0L / 2187, 64448.0L / 6561, -212.0L / 729},
    {9017.0L / 3168, -355.0L / 33, 46732.0L / 5247, 49.0L / 176, -5103.0L / 18656},
    {35.0L / 384, 0.0L, 500.0L / 1113, 125.0L / 192, -2187.0L / 6784, 11.0L / 84},
};
// fifth-order weights minus embedded fourth-order weights
constexpr std::array<Real, 7> kE{71.0L / 57600,      0.0L, -71.0L / 16695, 71.0L / 1920,
                                 -17253.0L / 339200, 22.0L / 525, -1.0L / 40};

struct StepResult {
    std::vector<Real> y;
    Real error_norm;
    Real max_abs_error;
};

StepResult dopri_step(const FirstOrderSystem& f, Real x, const std::vector<Real>& y, Real h,
                      const IntegrateOptions& opt) {
    const std::size_t n = y.size();
    std::array<std::vector<Real>, 7> k;
    std::vector<Real> stage(n);
    for (int s = 0; s < 7; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            Real acc = y[i];
            for (int j = 0; j < s; ++j) acc += h * kA[s][j] * k[j][i];
            stage[i] = acc;
        }
        k[s].assign(n, 0.0L);
        f(x + kC[s] * h, std::span<const Real>(stage), std::span<Real>(k[s]));
    }
    // stage 7 is evaluated at the fifth-order solution (FSAL row)
    StepResult out{stage, 0.0L, 0.0L};
    for (std::size_t i = 0; i < n; ++i) {
        Real err = 0.0L;
        for (int s = 0; s < 7; ++s) err += kE[s] * k[s][i];
        err = std::fabs(h * err);
        const Real scale = opt.abs_tol + opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(out.y[i]));
        out.error_norm = std::max(out.error_norm, err / scale);
        out.max_abs_error = std::max(out.max_abs_error, err);
    }
    return out;
}

std::string position(Real x) {
    std::ostringstream os;
    os.precision(17);
    os << static_cast<double>(x);
    return os.str();
}

}  // namespace

Trajectory integrate(const OdeProblem& problem, const InitialData& from, double to_x,
                     const IntegrateOptions& options) {
    const std::size_t n = static_cast<std::size_t>(problem.order());
    if (from.values.size() != n) throw RangeError("integrate: initial data needs one value per derivative order");
    if (from.x0 == 0 || to_x == 0) throw RangeError("integrate: endpoints must be nonzero");
    if ((from.x0 > 0) != (to_x > 0)) throw RangeError("integrate: endpoints must lie on the same side of 0");
    if (!(options.rel_tol > 0) || !(options.abs_tol >= 0)) throw RangeError("integrate: invalid tolerances");

    const FirstOrderSystem system = to_first_order_system(problem);
    Trajectory traj;
    traj.nodes.push_back({from.x0, from.values, 0.0});

    Real x = from.x0;
    const Real end = to_x;
    std::vector<Real> y(from.values.begin(), from.values.end());
    const Real direction = end > x ? 1.0L : -1.0L;
    const Real eps = std::numeric_limits<double>::epsilon();
    Real h = options.initial_step > 0 ? Real(options.initial_step) : 1e-3L * std::fabs(x);

    std::size_t steps = 0;
    while ((end - x) * direction > 0) {
        if (++steps > options.max_steps) throw Error("integrate: step budget exhausted at x=" + position(x));
        const Real floor_step = 1e3L * eps * std::fabs(x);
        if (h < floor_step) {
            traj.status = TrajectoryStatus::StepUnderflow;
            return traj;
        }
        // stay on one side of the singularity: at most half the remaining |x| per step
        h = std::min(h, 0.5L * std::fabs(x));
        bool last = false;
        if (h >= std::fabs(end - x)) {
            h = std::fabs(end - x);
            last = true;
        }
        StepResult step;
        try {
            step = dopri_step(system, x, y, direction * h, options);
        } catch (const Error& e) {
            throw Error("integrate: coefficient evaluation failed near x=" + position(x) + ": " + e.what());
        }
        const Real err = step.error_norm;
        if (!std::isfinite(static_cast<double>(err)) || err > 1.0L) {
            ++traj.rejected_steps;
            const Real factor = std::isfinite(static_cast<double>(err))
                                    ? std::max(0.2L, 0.9L * std::pow(err, -0.2L))
                                    : 0.2L;
            h *= factor;
            continue;
        }
        ++traj.accepted_steps;
        x = last ? end : x + direction * h;
        y = std::move(step.y);
        TrajectoryNode node{static_cast<double>(x), {}, static_cast<double>(step.max_abs_error)};
        Real ymax = 0.0L;
        for (Real v : y) {
            node.y.push_back(static_cast<double>(v));
            ymax = std::max(ymax, std::fabs(v));
        }
        traj.nodes.push_back(std::move(node));
        if (!(ymax <= options.blowup_ceiling)) {
            traj.status = TrajectoryStatus::Blowup;
            return traj;
        }
        const Real grow = err == 0 ? 5.0L : std::min(5.0L, std::max(0.2L, 0.9L * std::pow(err, -0.2L)));
        h *= grow;
    }
    traj.status = TrajectoryStatus::Completed;
    return traj;
}

// ---------------------------------------------------------------------------

SlopeEstimate vanishing_slope(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 8) throw RangeError("vanishing_slope: need at least 8 samples");
    double sx = 0, sy = 0;
    double lo = samples.front().first, hi = samples.front().first;
    std::vector<std::pair<double, double>> logs;
    logs.reserve(samples.size());
    for (const auto& [x, f] : samples) {
        if (!(x > 0)) throw RangeError("vanishing_slope: sample abscissae must be positive");
        if (f == 0 || !std::isfinite(f)) throw RangeError("vanishing_slope: samples must be finite and nonzero");
        logs.emplace_back(std::log(x), std::log(std::fabs(f)));
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double count = static_cast<double>(logs.size());
    for (const auto& [u, v] : logs) {
        sx += u;
        sy += v;
    }
    const double mx = sx / count, my = sy / count;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [u, v] : logs) {
        sxx += (u - mx) * (u - mx);
        sxy += (u - mx) * (v - my);
        syy += (v - my) * (v - my);
    }
    if (sxx == 0) throw RangeError("vanishing_slope: degenerate regression (all abscissae equal)");
    SlopeEstimate est;
    est.slope = sxy / sxx;
    est.intercept = my - est.slope * mx;
    double ss_res = 0;
    for (const auto& [u, v] : logs) {
        const double r = v - (est.intercept + est.slope * u);
        ss_res += r * r;
    }
    est.r_squared = syy == 0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    est.window = {lo, hi};
    return est;
}

std::vector<std::pair<double, double>> sample_window(const std::function<double(double)>& f, double lo, double hi,
                                                     int count) {
    if (!(lo > 0) || !(lo < hi) || count < 2) throw RangeError("sample_window: need 0 < lo < hi and count >= 2");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        const double x = lo * std::pow(hi / lo, double(j) / double(count - 1));
        out.emplace_back(x, f(x));
    }
    return out;
}

MinimalCScan minimal_c_scan(const JetFunction& f, int n, const SampleGrid& grid) {
    if (n < 1) throw RangeError("minimal_c_scan: order must be positive");
    MinimalCScan scan;
    for (double x : grid.points()) {
        const std::vector<double> d = f(x, n + 1);
        if (d.size() < static_cast<std::size_t>(n + 1)) throw RangeError("minimal_c_scan: jet too short");
        double denom = 0.0;
        for (int k = 0; k < n; ++k) denom += std::fabs(d[static_cast<std::size_t>(k)]) / std::pow(std::fabs(x), n - k);
        if (denom == 0.0) {
            scan.skipped.push_back(x);
            continue;
        }
        const double ratio = std::fabs(d[static_cast<std::size_t>(n)]) / denom;
        scan.ratios.emplace_back(x, ratio);
        scan.c_min = std::max(scan.c_min, ratio);
    }
    if (scan.ratios.empty()) throw RangeError("minimal_c_scan: f and its derivatives vanish at every sample");
    return scan;
}

// ---------------------------------------------------------------------------

namespace {
constexpr int kBesselTruncation = 60;
constexpr int kBesselDerivatives = 8;
}  // namespace

ReferenceSolution::ReferenceSolution(ReferenceKind kind, double parameter) : kind_(kind), parameter_(parameter) {
    if (kind == ReferenceKind::Example4) {
        if (!(parameter > 0 && parameter < 1)) throw RangeError("Example4 reference needs alpha in (0, 1)");
        return;
    }
    if (parameter < 2 || std::floor(parameter) != parameter || parameter > 64)
        throw RangeError("Bessel reference needs an integer m >= 2");
    bessel_derivatives_.push_back(bessel_series(static_cast<int>(parameter), kBesselTruncation));
    for (int k = 1; k < kBesselDerivatives; ++k)
        bessel_derivatives_.push_back(series_derivative(bessel_derivatives_.back()));
}

const RationalSeries& ReferenceSolution::series() const {
    if (kind_ != ReferenceKind::Bessel) throw RangeError("series(): only the Bessel reference is series-backed");
    return bessel_derivatives_.front();
}

std::vector<double> ReferenceSolution::derivatives(double x, int count) const {
    if (count < 1) throw RangeError("derivatives: count must be positive");
    if (kind_ == ReferenceKind::Bessel) {
        if (count > kBesselDerivatives) throw RangeError("derivatives: Bessel reference carries 8 derivatives");
        std::vector<double> out;
        for (int k = 0; k < count; ++k) out.push_back(evaluate_series(bessel_derivatives_[static_cast<std::size_t>(k)], x));
        return out;
    }
    if (count > 3) throw RangeError("derivatives: Example4 reference carries f, f', f''");
    const double a = parameter_;
    const double t = std::fabs(x);
    const double sign = x < 0 ? -1.0 : 1.0;
    if (t == 0) {
        if (count > 2) throw RangeError("derivatives: f'' is unbounded at 0");
        return std::vector<double>(static_cast<std::size_t>(count), 0.0);
    }
    // g(t) = t^a sin t on t = |x|; f(x) = g(|x|)
    const double ta = std::pow(t, a);
    const double s = std::sin(t), c = std::cos(t);
    const double g = ta * s;
    const double g1 = a * ta / t * s + ta * c;
    const double g2 = a * (a - 1) * ta / (t * t) * s + 2 * a * ta / t * c - ta * s;
    std::vector<double> out{g, sign * g1, g2};
    out.resize(static_cast<std::size_t>(count));
    return out;
}

JetFunction ReferenceSolution::jet() const {
    return [self = *this](double x, int count) { return self.derivatives(x, count); };
}

ReferenceSolution reference_solution(ReferenceKind kind, double parameter) { return ReferenceSolution(kind, parameter); }

}  // namespace singode
