#pragma once

#include "singode/model.hpp"
#include "singode/numerics.hpp"
#include "singode/numeric_types.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace singode {

/// B_n = sum_{k=0}^{n-1} 1/k!, exact.
Rational b_constant_exact(int n);
/// B_n rounded to double.
double b_constant(int n);

/// How the sampled tail of |x|^p |a_k(x)| behaves as x -> 0.
enum class TailBehavior {
    /// Tail varies by at most the convergence tolerance.
    Settled,
    /// Monotone with geometrically shrinking increments; limit extrapolated.
    Converging,
    /// Increments change sign; the limsup convention (tail maximum) is applied.
    Oscillating,
    /// Increments do not shrink; the coefficient is more singular than the weight.
    Diverging,
};

std::string to_string(TailBehavior behavior);

struct SkippedSample {
    double x;
    std::string reason;
};

/// Estimate of c_k = limsup_{x->0} |x|^p |a_k(x)|, p = n - k unless a pole order is declared.
struct SingularityWeight {
    int k = 0;
    int exponent = 0;
    /// (x, |x|^p |a_k(x)|) for every grid point that evaluated.
    std::vector<std::pair<double, double>> samples;
    std::vector<SkippedSample> skipped;
    /// Maximum over the last half of the geometric tail (per sign, then combined).
    double tail_max = 0.0;
    /// tail_max when the tail settles or oscillates; the extrapolated limit when it converges
    /// geometrically.
    double estimate = 0.0;
    bool converged = false;
    TailBehavior behavior = TailBehavior::Settled;
};

struct Tolerances {
    /// Slack on c_k <= 1/e and c_k < 1/B_n; also the upward slack applied before taking floor for M.
    double boundary = 1e-9;
    /// c_k <= zero counts as a vanishing weight (little-o coefficients).
    double zero = 1e-9;
    /// Relative tail variation accepted as converged.
    double convergence = 1e-6;
};

/// Samples |x|^p |a_k(x)| over the grid at the given working precision.
/// Points where a_k cannot be evaluated are skipped and recorded; throws Error when all fail.
SingularityWeight estimate_weight(const OdeProblem& problem, int k, const SampleGrid& grid,
                                  Precision precision = {}, double convergence_tol = 1e-6);

/// Same estimator with an explicit weight exponent (0 probes boundedness of a_k itself).
SingularityWeight estimate_weight_with_exponent(const OdeProblem& problem, int k, int exponent,
                                                const SampleGrid& grid, Precision precision = {},
                                                double convergence_tol = 1e-6);

/// C_n = max_k c_k (0 for an empty list).
double c_constant(std::span<const SingularityWeight> weights);

/// floor(B_n C + n - 1), computed exactly from the binary value of C.
long vanishing_order_bound(double C, int n);

/// Exact predicates behind the report flags.
bool within_euler_bound(double c, double tol);    // c <= 1/e + tol
bool within_relaxed_bound(double c, int n, double tol);  // c < 1/B_n - tol

enum class Verdict { UniqueNearZero, ConditionalOnFlatness, Inconclusive };

/// "UNIQUE_NEAR_ZERO", "CONDITIONAL_ON_FLATNESS", "INCONCLUSIVE".
std::string to_string(Verdict verdict);

struct CriteriaReport {
    std::string label;
    int n = 0;
    double B_n = 0.0;
    double C_n = 0.0;
    std::vector<SingularityWeight> weights;
    /// Unweighted sup |a_k| estimates backing the bounded-coefficient check.
    std::vector<SingularityWeight> magnitudes;
    /// every c_k <= 1/e + tol
    bool theorem1_satisfied = false;
    /// every c_k < 1/B_n - tol
    bool relaxed_satisfied = false;
    /// every c_k ~ 0 (coefficients are o(|x|^{k-n}))
    bool corollary2_satisfied = false;
    /// every a_k bounded near 0
    bool corollary3_satisfied = false;
    /// Largest derivative order whose vanishing at 0 forces f = 0 near 0; nullopt when C_n is infinite.
    std::optional<long> flatness_bound_M;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> notes;
};

/// Estimates every weight and evaluates all criteria. Non-converged weights make the
/// verdict Inconclusive and clear the weight-based flags.
CriteriaReport check_uniqueness(const OdeProblem& problem, const SampleGrid& grid, const Tolerances& tol = {},
                                Precision precision = {});

}  // namespace singode
