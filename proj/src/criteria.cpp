#include "singode/criteria.hpp"

#include "singode/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace singode {

Rational b_constant_exact(int n) {
    if (n < 1) throw RangeError("b_constant: n must be at least 1");
    Rational sum = 0;
    Rational term = 1;
    for (int k = 0; k < n; ++k) {
        if (k > 0) term /= k;
        sum += term;
    }
    return sum;
}

double b_constant(int n) { return to_double(b_constant_exact(n)); }

std::string to_string(TailBehavior behavior) {
    switch (behavior) {
        case TailBehavior::Settled: return "settled";
        case TailBehavior::Converging: return "converging";
        case TailBehavior::Oscillating: return "oscillating";
        case TailBehavior::Diverging: return "diverging";
    }
    return "?";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::UniqueNearZero: return "UNIQUE_NEAR_ZERO";
        case Verdict::ConditionalOnFlatness: return "CONDITIONAL_ON_FLATNESS";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

struct TailAnalysis {
    double estimate = 0.0;
    double tail_max = 0.0;
    bool converged = false;
    TailBehavior behavior = TailBehavior::Settled;
};

// `w` is ordered by decreasing |x|.
TailAnalysis analyze_tail(const std::vector<double>& w, double tol) {
    const std::vector<double> tail(w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2), w.end());
    TailAnalysis out;
    const auto [lo_it, hi_it] = std::minmax_element(tail.begin(), tail.end());
    out.tail_max = *hi_it;
    out.estimate = out.tail_max;
    if (!std::isfinite(out.tail_max)) {
        out.behavior = TailBehavior::Diverging;
        return out;
    }
    const double scale = out.tail_max;  // weights are nonnegative
    if (scale == 0.0 || out.tail_max - *lo_it <= tol * scale) {
        out.converged = true;
        return out;
    }

    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    std::vector<double> d;
    for (std::size_t j = 0; j + 1 < tail.size(); ++j) d.push_back(tail[j + 1] - tail[j]);

    // Trailing run of increments at rounding level: the sequence has numerically settled.
    std::size_t significant = d.size();
    while (significant > 0 && std::fabs(d[significant - 1]) <= noise) --significant;
    if (d.size() - significant >= 3) {
        out.estimate = *std::max_element(tail.begin() + static_cast<std::ptrdiff_t>(significant), tail.end());
        out.converged = true;
        return out;
    }

    bool sign_change = false;
    bool shrinking = true;
    for (std::size_t j = 0; j + 1 < significant; ++j) {
        if (std::fabs(d[j]) <= noise || std::fabs(d[j + 1]) <= noise) continue;
        const double q = d[j + 1] / d[j];
        if (q < 0) sign_change = true;
        if (q >= 1) shrinking = false;
    }
    if (sign_change) {
        out.behavior = TailBehavior::Oscillating;
        return out;
    }
    if (!shrinking || significant < 3) {
        out.behavior = TailBehavior::Diverging;
        return out;
    }

    // Aitken delta-squared; exact for L + A x^s on a geometric grid.
    std::vector<double> accelerated;
    for (std::size_t j = 0; j + 2 <= significant; ++j) {
        const double d2 = d[j + 1] - d[j];
        if (d2 == 0.0) continue;
        accelerated.push_back(tail[j + 2] - d[j + 1] * d[j + 1] / d2);
    }
    out.behavior = TailBehavior::Converging;
    if (accelerated.empty()) return out;
    const std::size_t last = std::min<std::size_t>(4, accelerated.size());
    const auto first = accelerated.end() - static_cast<std::ptrdiff_t>(last);
    const auto [a_lo, a_hi] = std::minmax_element(first, accelerated.end());
    out.converged = *a_hi - *a_lo <= tol * scale;
    out.estimate = std::max(0.0, accelerated.back());
    return out;
}

double weight_sample(const OdeProblem& problem, int k, int exponent, double x, Precision precision) {
    if (precision.is_native()) return std::pow(std::fabs(x), exponent) * std::fabs(problem.coefficient_at(k, x));
    ScopedPrecision scope(precision);
    const BigReal bx(x);
    const BigReal a = expr::evaluate(problem.coefficients()[static_cast<std::size_t>(k)].formula, bx);
    const BigReal w = pow(abs(bx), exponent) * abs(a);
    return w.convert_to<double>();
}

int severity(TailBehavior b) {
    switch (b) {
        case TailBehavior::Settled: return 0;
        case TailBehavior::Converging: return 1;
        case TailBehavior::Oscillating: return 2;
        case TailBehavior::Diverging: return 3;
    }
    return 3;
}

}  // namespace

SingularityWeight estimate_weight_with_exponent(const OdeProblem& problem, int k, int exponent,
                                                const SampleGrid& grid, Precision precision, double convergence_tol) {
    if (k < 0 || k >= problem.order()) throw RangeError("estimate_weight: coefficient index out of range");
    if (grid.magnitudes.size() < 16) throw RangeError("estimate_weight: grid needs at least 16 magnitudes");
    SingularityWeight weight;
    weight.k = k;
    weight.exponent = exponent;

    bool have_any = false;
    bool first_side = true;
    for (double sign : {1.0, -1.0}) {
        std::vector<double> side;
        for (double m : grid.magnitudes) {
            const double x = sign * m;
            try {
                const double w = weight_sample(problem, k, exponent, x, precision);
                weight.samples.emplace_back(x, w);
                side.push_back(w);
            } catch (const DomainError& e) {
                weight.skipped.push_back({x, e.what()});
            }
        }
        if (side.size() < 4) continue;
        const TailAnalysis t = analyze_tail(side, convergence_tol);
        if (first_side) {
            weight.estimate = t.estimate;
            weight.tail_max = t.tail_max;
            weight.converged = t.converged;
            weight.behavior = t.behavior;
            first_side = false;
        } else {
            weight.estimate = std::max(weight.estimate, t.estimate);
            weight.tail_max = std::max(weight.tail_max, t.tail_max);
            weight.converged = weight.converged && t.converged;
            if (severity(t.behavior) > severity(weight.behavior)) weight.behavior = t.behavior;
        }
        have_any = true;
    }
    if (!have_any)
        throw Error("estimate_weight: a" + std::to_string(k) + " failed to evaluate on the sample grid");
    std::sort(weight.samples.begin(), weight.samples.end(),
              [](const auto& a, const auto& b) { return std::fabs(a.first) > std::fabs(b.first) ||
                                                        (std::fabs(a.first) == std::fabs(b.first) && a.first > b.first); });
    return weight;
}

SingularityWeight estimate_weight(const OdeProblem& problem, int k, const SampleGrid& grid, Precision precision,
                                  double convergence_tol) {
    return estimate_weight_with_exponent(problem, k, problem.weight_exponent(k), grid, precision, convergence_tol);
}

double c_constant(std::span<const SingularityWeight> weights) {
    double c = 0.0;
    for (const auto& w : weights) c = std::max(c, w.estimate);
    return c;
}

long vanishing_order_bound(double C, int n) {
    if (!(C >= 0) || !std::isfinite(C)) throw RangeError("vanishing_order_bound: C must be finite and nonnegative");
    if (n < 1) throw RangeError("vanishing_order_bound: n must be positive");
    const Rational value = b_constant_exact(n) * exact_rational(C) + Rational(n - 1);
    // floor of a nonnegative rational
    const BigInt q = boost::multiprecision::numerator(value) / boost::multiprecision::denominator(value);
    return q.convert_to<long>();
}

bool within_euler_bound(double c, double tol) {
    // c <= 1/e + tol  <=>  (c - tol) e <= 1; the enclosure decides since 1/e is irrational.
    const Rational lhs = exact_rational(c) - exact_rational(tol);
    if (lhs <= 0) return true;
    const auto& e = euler_enclosure();
    if (lhs * e.hi <= 1) return true;
    if (lhs * e.lo > 1) return false;
    throw Error("within_euler_bound: value within 1e-600 of 1/e");
}

bool within_relaxed_bound(double c, int n, double tol) {
    // c < 1/B_n - tol  <=>  (c + tol) B_n < 1
    return (exact_rational(c) + exact_rational(tol)) * b_constant_exact(n) < 1;
}

CriteriaReport check_uniqueness(const OdeProblem& problem, const SampleGrid& grid, const Tolerances& tol,
                                Precision precision) {
    CriteriaReport report;
    report.label = problem.label();
    report.n = problem.order();
    report.B_n = b_constant(report.n);

    bool all_converged = true;
    bool any_diverging = false;
    for (int k = 0; k < report.n; ++k) {
        SingularityWeight w = estimate_weight(problem, k, grid, precision, tol.convergence);
        const std::string tag = "c" + std::to_string(k);
        if (!w.skipped.empty())
            report.notes.push_back(tag + ": " + std::to_string(w.skipped.size()) +
                                   " grid point(s) skipped after evaluation errors");
        switch (w.behavior) {
            case TailBehavior::Oscillating:
                report.notes.push_back(tag + ": sampled weights oscillate; limsup convention applied (tail maximum)");
                break;
            case TailBehavior::Diverging:
                report.notes.push_back(tag + ": weight grows along the grid; a" + std::to_string(k) +
                                       " is more singular than |x|^-" + std::to_string(w.exponent));
                any_diverging = true;
                break;
            case TailBehavior::Converging:
                report.notes.push_back(tag + ": limit extrapolated from geometrically shrinking tail increments");
                break;
            case TailBehavior::Settled: break;
        }
        if (!w.converged) {
            all_converged = false;
            report.notes.push_back(tag + ": estimate did not converge on the grid");
        }
        report.weights.push_back(std::move(w));
        report.magnitudes.push_back(estimate_weight_with_exponent(problem, k, 0, grid, precision, tol.convergence));
    }
    report.C_n = c_constant(report.weights);

    bool theorem1 = all_converged;
    bool relaxed = all_converged;
    bool cor2 = all_converged;
    for (const auto& w : report.weights) {
        if (!std::isfinite(w.estimate)) {
            theorem1 = relaxed = cor2 = false;
            continue;
        }
        theorem1 = theorem1 && within_euler_bound(w.estimate, tol.boundary);
        relaxed = relaxed && within_relaxed_bound(w.estimate, report.n, tol.boundary);
        cor2 = cor2 && w.estimate <= tol.zero;
    }
    bool cor3 = true;
    for (const auto& m : report.magnitudes)
        cor3 = cor3 && m.behavior != TailBehavior::Diverging && std::isfinite(m.estimate);
    report.theorem1_satisfied = theorem1;
    report.relaxed_satisfied = relaxed;
    report.corollary2_satisfied = cor2;
    report.corollary3_satisfied = cor3;

    if (std::isfinite(report.C_n)) report.flatness_bound_M = vanishing_order_bound(report.C_n + tol.boundary, report.n);

    if (!all_converged || any_diverging || !report.flatness_bound_M) {
        report.verdict = Verdict::Inconclusive;
    } else if (theorem1) {
        report.verdict = Verdict::UniqueNearZero;
    } else {
        report.verdict = Verdict::ConditionalOnFlatness;
    }
    return report;
}

}  // namespace singode
