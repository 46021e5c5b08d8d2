#pragma once

#include "singode/error.hpp"
#include "singode/expr.hpp"
#include "singode/numeric_types.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace singode {

/// Coefficient-type policy for series arithmetic.
template <class T>
struct SeriesScalar;

template <>
struct SeriesScalar<Rational> {
    static bool is_zero(const Rational& c) { return c == 0; }
    static std::optional<long> integer_value(const Rational& v) {
        if (boost::multiprecision::denominator(v) != 1) return std::nullopt;
        return boost::multiprecision::numerator(v).convert_to<long>();
    }
    static double to_double(const Rational& v) { return singode::to_double(v); }
};

/// Real coefficients treat |c| <= 1e-30 as zero.
template <>
struct SeriesScalar<BigReal> {
    static bool is_zero(const BigReal& c) { return abs(c) <= BigReal("1e-30"); }
    static std::optional<long> integer_value(const BigReal& v) {
        const BigReal r = round(v);
        if (abs(v - r) > BigReal("1e-30")) return std::nullopt;
        return r.convert_to<long>();
    }
    static double to_double(const BigReal& v) { return v.convert_to<double>(); }
};

/// x^nu * (c_0 + c_1 x + ... + c_K x^K) + O(x^{nu+K+1}).
///
/// `exact` series are finite expansions with no error term (polynomials, Laurent
/// coefficients). Leading zero coefficients are stripped on construction, so c_0 != 0
/// unless the series is zero; a truncated zero series keeps nu = the exponent it is
/// certified through.
template <class T>
class GeneralizedPowerSeries {
public:
    using Scalar = SeriesScalar<T>;

    GeneralizedPowerSeries(T nu, std::vector<T> coeffs, bool exact = false)
        : nu_(std::move(nu)), coeffs_(std::move(coeffs)), exact_(exact) {
        if (coeffs_.empty()) throw RangeError("GeneralizedPowerSeries: at least one coefficient required");
        normalize();
    }

    static GeneralizedPowerSeries zero() { return GeneralizedPowerSeries(T(0), {T(0)}, true); }
    static GeneralizedPowerSeries monomial(T coefficient, T exponent) {
        return GeneralizedPowerSeries(std::move(exponent), {std::move(coefficient)}, true);
    }

    const T& nu() const noexcept { return nu_; }
    const std::vector<T>& coeffs() const noexcept { return coeffs_; }
    std::size_t truncation_order() const noexcept { return coeffs_.size() - 1; }
    bool exact() const noexcept { return exact_; }
    bool is_zero() const { return coeffs_.size() == 1 && Scalar::is_zero(coeffs_[0]); }
    /// Highest exponent carried: nu + K.
    T valid_through() const { return T(nu_ + T(static_cast<long>(coeffs_.size()) - 1)); }

    /// Coefficient of x^exponent; zero outside the carried range.
    T coefficient_of(const T& exponent) const {
        const auto offset = Scalar::integer_value(T(exponent - nu_));
        if (!offset || *offset < 0 || static_cast<std::size_t>(*offset) >= coeffs_.size()) return T(0);
        return coeffs_[static_cast<std::size_t>(*offset)];
    }

    /// Drops terms above max_exponent; the result is no longer exact if anything was dropped.
    GeneralizedPowerSeries truncated(const T& max_exponent) const {
        if (valid_through() <= max_exponent) return *this;
        const auto keep = Scalar::integer_value(T(max_exponent - nu_));
        if (!keep) throw RangeError("truncated: exponent offset is not an integer");
        if (*keep < 0) return GeneralizedPowerSeries(max_exponent, {T(0)}, false);
        std::vector<T> c(coeffs_.begin(), coeffs_.begin() + *keep + 1);
        return GeneralizedPowerSeries(nu_, std::move(c), false);
    }

    friend bool operator==(const GeneralizedPowerSeries& a, const GeneralizedPowerSeries& b) {
        return a.exact_ == b.exact_ && a.nu_ == b.nu_ && a.coeffs_ == b.coeffs_;
    }

private:
    void normalize() {
        std::size_t lead = 0;
        while (lead < coeffs_.size() && Scalar::is_zero(coeffs_[lead])) ++lead;
        if (lead == coeffs_.size()) {
            nu_ = exact_ ? T(0) : valid_through();
            coeffs_.assign(1, T(0));
            return;
        }
        if (lead > 0) {
            nu_ = T(nu_ + T(static_cast<long>(lead)));
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
        }
        if (exact_)
            while (coeffs_.size() > 1 && Scalar::is_zero(coeffs_.back())) coeffs_.pop_back();
    }

    T nu_;
    std::vector<T> coeffs_;
    bool exact_;
};

using RationalSeries = GeneralizedPowerSeries<Rational>;
using RealSeries = GeneralizedPowerSeries<BigReal>;

/// Term-wise derivative: exponent nu - 1, coefficients (nu + i) c_i.
template <class T>
GeneralizedPowerSeries<T> series_derivative(const GeneralizedPowerSeries<T>& s) {
    if (s.is_zero()) {
        if (s.exact()) return s;
        return GeneralizedPowerSeries<T>(T(s.nu() - T(1)), {T(0)}, false);
    }
    std::vector<T> c(s.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = T((s.nu() + T(static_cast<long>(i))) * s.coeffs()[i]);
    return GeneralizedPowerSeries<T>(T(s.nu() - T(1)), std::move(c), s.exact());
}

/// Cauchy product. Exponents add; valid through the smallest certified order.
template <class T>
GeneralizedPowerSeries<T> series_product(const GeneralizedPowerSeries<T>& s, const GeneralizedPowerSeries<T>& t) {
    const T nu = T(s.nu() + t.nu());
    std::size_t K = 0;
    if (s.exact() && t.exact()) {
        K = s.truncation_order() + t.truncation_order();
    } else if (s.exact()) {
        K = t.truncation_order();
    } else if (t.exact()) {
        K = s.truncation_order();
    } else {
        K = std::min(s.truncation_order(), t.truncation_order());
    }
    std::vector<T> c(K + 1, T(0));
    const auto& a = s.coeffs();
    const auto& b = t.coeffs();
    for (std::size_t i = 0; i < a.size() && i <= K; ++i)
        for (std::size_t j = 0; j < b.size() && i + j <= K; ++j) c[i + j] += a[i] * b[j];
    return GeneralizedPowerSeries<T>(nu, std::move(c), s.exact() && t.exact());
}

/// Sum; exponents of the two operands must differ by an integer.
template <class T>
GeneralizedPowerSeries<T> series_sum(const GeneralizedPowerSeries<T>& s, const GeneralizedPowerSeries<T>& t) {
    using Scalar = SeriesScalar<T>;
    if (s.exact() && s.is_zero()) return t;
    if (t.exact() && t.is_zero()) return s;
    const T lo = s.nu() < t.nu() ? s.nu() : t.nu();
    T hi;
    if (s.exact() && t.exact()) {
        hi = s.valid_through() < t.valid_through() ? t.valid_through() : s.valid_through();
    } else if (s.exact()) {
        hi = t.valid_through();
    } else if (t.exact()) {
        hi = s.valid_through();
    } else {
        hi = s.valid_through() < t.valid_through() ? s.valid_through() : t.valid_through();
    }
    const auto span = Scalar::integer_value(T(hi - lo));
    const auto s_off = Scalar::integer_value(T(s.nu() - lo));
    const auto t_off = Scalar::integer_value(T(t.nu() - lo));
    if (!span || !s_off || !t_off) throw RangeError("series_sum: exponents differ by a non-integer");
    if (*span < 0) return GeneralizedPowerSeries<T>(hi, {T(0)}, false);
    std::vector<T> c(static_cast<std::size_t>(*span) + 1, T(0));
    auto accumulate = [&c](const GeneralizedPowerSeries<T>& u, long offset) {
        for (std::size_t i = 0; i < u.coeffs().size(); ++i) {
            const long idx = offset + static_cast<long>(i);
            if (idx >= 0 && static_cast<std::size_t>(idx) < c.size()) c[static_cast<std::size_t>(idx)] += u.coeffs()[i];
        }
    };
    accumulate(s, *s_off);
    accumulate(t, *t_off);
    return GeneralizedPowerSeries<T>(lo, std::move(c), s.exact() && t.exact());
}

template <class T>
GeneralizedPowerSeries<T> series_scale(const GeneralizedPowerSeries<T>& s, const T& factor) {
    std::vector<T> c = s.coeffs();
    for (auto& v : c) v *= factor;
    if (SeriesScalar<T>::is_zero(factor)) {
        if (s.exact()) return GeneralizedPowerSeries<T>::zero();
        return GeneralizedPowerSeries<T>(s.valid_through(), {T(0)}, false);
    }
    return GeneralizedPowerSeries<T>(s.nu(), std::move(c), s.exact());
}

/// Leading exponent and coefficient: the N and a_N of f = a_N x^N + O(x^{N+1}).
template <class T>
struct LeadingTerm {
    T exponent;
    T coefficient;
};

/// Throws RangeError when the series is zero through its truncation order.
template <class T>
LeadingTerm<T> vanishing_order(const GeneralizedPowerSeries<T>& s) {
    if (s.is_zero()) throw RangeError("vanishing_order: series vanishes through its truncation order");
    return {s.nu(), s.coeffs().front()};
}

/// Residual of s^(n) + sum_k a_k s^(k), with each a_k an exact Laurent expansion.
template <class T>
struct ResidualResult {
    GeneralizedPowerSeries<T> residual;
    /// Highest exponent at which the residual is certified; nullopt when it is exact.
    std::optional<T> certified_through;
    /// Number of exponents whose residual coefficient is representable.
    long representable_terms = 0;
    /// Fewer than 3 residual coefficients are representable.
    bool truncation_insufficient = false;
};

template <class T>
ResidualResult<T> ode_residual(const std::vector<GeneralizedPowerSeries<T>>& laurent_coefficients,
                               const GeneralizedPowerSeries<T>& s) {
    const int n = static_cast<int>(laurent_coefficients.size());
    if (n < 1) throw RangeError("ode_residual: at least one coefficient required");
    for (const auto& a : laurent_coefficients)
        if (!a.exact()) throw RangeError("ode_residual: coefficients must be exact Laurent expansions");

    std::vector<GeneralizedPowerSeries<T>> derivs{s};
    for (int k = 1; k <= n; ++k) derivs.push_back(series_derivative(derivs.back()));

    GeneralizedPowerSeries<T> r = derivs[static_cast<std::size_t>(n)];
    T lowest = T(s.nu() - T(n));
    for (int k = 0; k < n; ++k) {
        const auto& a = laurent_coefficients[static_cast<std::size_t>(k)];
        if (a.is_zero()) continue;
        r = series_sum(r, series_product(a, derivs[static_cast<std::size_t>(k)]));
        const T term_low = T(a.nu() + s.nu() - T(k));
        if (term_low < lowest) lowest = term_low;
    }

    ResidualResult<T> result{r, std::nullopt, 0, false};
    if (!r.exact()) {
        result.certified_through = r.valid_through();
        const auto count = SeriesScalar<T>::integer_value(T(r.valid_through() - lowest));
        result.representable_terms = count ? *count + 1 : 0;
        result.truncation_insufficient = result.representable_terms < 3;
    } else {
        result.representable_terms = -1;
    }
    return result;
}

/// Sum of c_i x^{nu+i} at x. Integer nu keeps the sign of x; otherwise |x|^nu is used.
template <class T>
double evaluate_series(const GeneralizedPowerSeries<T>& s, double x) {
    using Scalar = SeriesScalar<T>;
    const auto integer_nu = Scalar::integer_value(s.nu());
    double poly = 0.0;
    for (std::size_t i = s.coeffs().size(); i-- > 0;) poly = poly * x + Scalar::to_double(s.coeffs()[i]);
    if (integer_nu) return poly * std::pow(x, static_cast<double>(*integer_nu));
    return poly * std::pow(std::fabs(x), Scalar::to_double(s.nu()));
}

/// f, f', ..., f^(count-1) at x by exact term-wise differentiation.
template <class T>
std::vector<double> evaluate_derivatives(const GeneralizedPowerSeries<T>& s, double x, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    GeneralizedPowerSeries<T> d = s;
    for (int k = 0; k < count; ++k) {
        out.push_back(evaluate_series(d, x));
        if (k + 1 < count) d = series_derivative(d);
    }
    return out;
}

/// Truncated Bessel series J_m: term k = (-1)^k / (k! (k+m)! 2^{2k+m}) at exponent 2k + m,
/// coefficients carried through x^{m+K}.
RationalSeries bessel_series(int m, int truncation_order);

/// Exact rational series of a polynomial expression, optionally composed with sin, cos
/// and exp of arguments vanishing at 0; transcendental parts are truncated at
/// max_exponent. Throws RangeError for anything else (constants e and pi, ln, sqrt,
/// abs, division by a non-monomial).
RationalSeries series_from_expr(const expr::Expr& e, long max_exponent = 40);

/// Printed as `x^nu * (c0 + c1*x + ...)` with exact rationals.
std::string to_string(const RationalSeries& s);

/// Roots of sum_{k=0}^{n} a_k r(r-1)...(r-k+1) with a_n = 1.
struct IndicialRoots {
    std::vector<std::complex<double>> roots;
    /// Ascending powers of r.
    std::vector<double> polynomial_coeffs;
};

IndicialRoots indicial_roots(int n, const std::vector<double>& a);

/// Value of the indicial polynomial at r.
std::complex<double> evaluate_indicial(const IndicialRoots& roots, std::complex<double> r);

}  // namespace singode
