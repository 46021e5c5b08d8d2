#pragma once

#include "singode/expr.hpp"
#include "singode/numeric_types.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace singode {

/// One coefficient a_k(x) of y^(n) + a_{n-1}(x) y^(n-1) + ... + a_0(x) y = 0.
struct CoefficientSpec {
    expr::Expr formula;
    /// Asserted order of the pole of a_k at 0; selects the weight exponent when present.
    std::optional<int> declared_pole_order;
};

/// Linear homogeneous ODE of order n >= 2 on (-a, a), coefficients singular at most at 0.
/// Immutable once constructed.
class OdeProblem {
public:
    /// Throws FormatError when n < 2, the coefficient count differs from n,
    /// the radius is not positive, or a declared pole order exceeds n - k.
    OdeProblem(int order, std::vector<CoefficientSpec> coefficients, double interval_radius, std::string label);

    int order() const noexcept { return order_; }
    const std::vector<CoefficientSpec>& coefficients() const noexcept { return coefficients_; }
    double interval_radius() const noexcept { return interval_radius_; }
    const std::string& label() const noexcept { return label_; }

    /// a_k(x). x must be nonzero; evaluation errors propagate as DomainError.
    double coefficient_at(int k, double x) const;
    long double coefficient_at(int k, long double x) const;
    double coefficient_at(int k, double x, Precision precision) const;

    /// Exponent p in |x|^p |a_k(x)|: the declared pole order, else n - k.
    int weight_exponent(int k) const;

private:
    void check_index(int k) const;

    int order_;
    std::vector<CoefficientSpec> coefficients_;
    double interval_radius_;
    std::string label_;
};

/// Values y, y', ..., y^(n-1) at x0.
struct InitialData {
    double x0 = 0.0;
    std::vector<double> values;
};

/// Parses the line-oriented problem format:
///   order = <int>, interval = <real>, label = <text>,
///   a<k> = "<expression>", pole_order_a<k> = <int>.
/// Blank lines and lines starting with '#' are ignored; unknown or repeated keys are errors.
OdeProblem load_problem(std::string_view text);
OdeProblem load_problem_file(const std::filesystem::path& path);

/// Y' = F(x, Y) with Y_i = y^(i) and F_{n-1} = -sum_k a_k(x) Y_k.
class FirstOrderSystem {
public:
    explicit FirstOrderSystem(const OdeProblem& problem) : problem_(&problem) {}

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(problem_->order()); }

    void operator()(double x, std::span<const double> y, std::span<double> dydx) const;
    void operator()(long double x, std::span<const long double> y, std::span<long double> dydx) const;

private:
    template <class T>
    void apply(T x, std::span<const T> y, std::span<T> dydx) const;

    const OdeProblem* problem_;
};

/// The returned system refers to `problem`, which must outlive it.
FirstOrderSystem to_first_order_system(const OdeProblem& problem);

}  // namespace singode
