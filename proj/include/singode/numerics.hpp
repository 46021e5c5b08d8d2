#pragma once

#include "singode/model.hpp"
#include "singode/series.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace singode {

/// Geometric sample magnitudes probing x -> 0 from both sides.
struct SampleGrid {
    /// Strictly decreasing, positive; at least 16 entries.
    std::vector<double> magnitudes;
    /// Constant ratio between consecutive magnitudes, in (0, 1).
    double ratio = 0.0;

    /// Signed points +m_0, -m_0, +m_1, -m_1, ...
    std::vector<double> points() const;
    std::size_t size() const noexcept { return 2 * magnitudes.size(); }
};

/// count magnitudes x_max (x_min/x_max)^{j/(count-1)}, j = 0..count-1, each with both signs.
SampleGrid geometric_grid(double x_max, double x_min, int count);

/// 64 magnitudes from 1e-1 down to 1e-8.
SampleGrid default_grid();

enum class TrajectoryStatus { Completed, Blowup, StepUnderflow };

std::string to_string(TrajectoryStatus status);

struct TrajectoryNode {
    double x = 0.0;
    std::vector<double> y;
    /// Local error estimate of the step that produced this node (0 for the start node).
    double error = 0.0;
};

struct Trajectory {
    std::vector<TrajectoryNode> nodes;
    TrajectoryStatus status = TrajectoryStatus::Completed;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

struct IntegrateOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-20;
    /// Blowup once max |Y_i| exceeds this.
    double blowup_ceiling = 1e150;
    /// 0 picks a step from |x0|.
    double initial_step = 0.0;
    std::size_t max_steps = 2'000'000;
};

/// Dormand-Prince 5(4) in extended precision from `from.x0` to `to_x`, which must be
/// nonzero and of the same sign: integration never crosses x = 0. Steps shrink
/// with |x|; StepUnderflow is reported when a step falls below 1e3 machine epsilons
/// relative to x.
Trajectory integrate(const OdeProblem& problem, const InitialData& from, double to_x,
                     const IntegrateOptions& options = {});

struct SlopeEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> window;
};

/// Least-squares slope of ln|f| against ln x. Needs >= 8 samples with x > 0 and f != 0.
SlopeEstimate vanishing_slope(const std::vector<std::pair<double, double>>& samples);

/// Samples f on `count` log-spaced points of [lo, hi] (default decade window [1e-4, 1e-2]).
std::vector<std::pair<double, double>> sample_window(const std::function<double(double)>& f, double lo = 1e-4,
                                                     double hi = 1e-2, int count = 33);

/// f, f', ..., f^(count-1) at x.
using JetFunction = std::function<std::vector<double>(double x, int count)>;

struct MinimalCScan {
    /// (x, |f^(n)(x)| / sum_k |f^(k)(x)| / |x|^{n-k}) per usable sample.
    std::vector<std::pair<double, double>> ratios;
    /// Samples where every f^(k), k < n, vanished.
    std::vector<double> skipped;
    /// Supremum of the recorded ratios: the least C for which
    /// |f^(n)| <= C sum_k |f^(k)|/|x|^{n-k} holds on the sampled set.
    double c_min = 0.0;
};

MinimalCScan minimal_c_scan(const JetFunction& f, int n, const SampleGrid& grid);

enum class ReferenceKind { Example4, Bessel };

/// Known nonzero solutions with zero initial data at 0:
///  - Example4: |x|^alpha sin|x| for alpha in (0, 1), solving
///    y'' - (2 alpha/x) y' + (1 + (alpha^2 + alpha)/x^2) y = 0;
///  - Bessel: the series of J_m for integer m >= 2.
class ReferenceSolution {
public:
    ReferenceSolution(ReferenceKind kind, double parameter);

    ReferenceKind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }

    /// f, f', ... at x; Example4 supplies up to f'' and needs x != 0 for f''.
    std::vector<double> derivatives(double x, int count) const;
    double value(double x) const { return derivatives(x, 1).front(); }
    JetFunction jet() const;

    /// The exact series backing the Bessel evaluator.
    const RationalSeries& series() const;

private:
    ReferenceKind kind_;
    double parameter_;
    std::vector<RationalSeries> bessel_derivatives_;
};

ReferenceSolution reference_solution(ReferenceKind kind, double parameter);

}  // namespace singode
