#include "singode/series.hpp"

#include <unsupported/Eigen/Polynomials>

#include <sstream>

namespace singode {

RationalSeries bessel_series(int m, int truncation_order) {
    if (m < 0) throw RangeError("bessel_series: order m must be nonnegative");
    if (truncation_order < 1) throw RangeError("bessel_series: truncation order must be at least 1");
    std::vector<Rational> c(static_cast<std::size_t>(truncation_order) + 1, Rational(0));
    // term k: (-1)^k / (k! (k+m)! 2^{2k+m})
    BigInt k_fact = 1;
    BigInt km_fact = 1;
    for (int j = 2; j <= m; ++j) km_fact *= j;
    BigInt pow2 = BigInt(1) << static_cast<unsigned>(m);
    for (int k = 0; 2 * k <= truncation_order; ++k) {
        if (k > 0) {
            k_fact *= k;
            km_fact *= k + m;
            pow2 <<= 2;
        }
        Rational term(BigInt(1), k_fact * km_fact * pow2);
        c[static_cast<std::size_t>(2 * k)] = k % 2 == 0 ? term : Rational(-term);
    }
    return RationalSeries(Rational(m), std::move(c), false);
}

namespace {

RationalSeries truncate_inexact(const RationalSeries& s, long max_exponent) {
    if (s.exact()) return s;
    return s.truncated(Rational(max_exponent));
}

// sum_j g_j a^j with a of positive integer valuation, truncated at max_exponent.
RationalSeries compose(const std::vector<Rational>& taylor, const RationalSeries& a, long max_exponent) {
    RationalSeries result = RationalSeries::zero();
    RationalSeries power = RationalSeries::monomial(Rational(1), Rational(0));
    for (std::size_t j = 0; j < taylor.size(); ++j) {
        if (j > 0) power = series_product(power, a).truncated(Rational(max_exponent));
        if (power.is_zero() || power.nu() > max_exponent) break;
        if (taylor[j] != 0) result = series_sum(result, series_scale(power, taylor[j]));
    }
    const RationalSeries tail(Rational(max_exponent), {Rational(0)}, false);
    return series_sum(result, tail).truncated(Rational(max_exponent));
}

std::vector<Rational> taylor_coefficients(expr::Function f, std::size_t count) {
    std::vector<Rational> g(count, Rational(0));
    Rational inv_fact = 1;
    for (std::size_t j = 0; j < count; ++j) {
        if (j > 0) inv_fact /= static_cast<long>(j);
        switch (f) {
            case expr::Function::Exp: g[j] = inv_fact; break;
            case expr::Function::Sin:
                if (j % 2 == 1) g[j] = (j / 2) % 2 == 0 ? inv_fact : Rational(-inv_fact);
                break;
            case expr::Function::Cos:
                if (j % 2 == 0) g[j] = (j / 2) % 2 == 0 ? inv_fact : Rational(-inv_fact);
                break;
            default: throw RangeError("no Taylor expansion for this function");
        }
    }
    return g;
}

bool is_single_term(const RationalSeries& s) { return s.exact() && s.coeffs().size() == 1 && !s.is_zero(); }

RationalSeries convert(const expr::Expr& e, long max_exponent) {
    using expr::NodeKind;
    switch (e.kind()) {
        case NodeKind::Number: return RationalSeries::monomial(parse_decimal(e.literal()), Rational(0));
        case NodeKind::Variable: return RationalSeries::monomial(Rational(1), Rational(1));
        case NodeKind::Constant:
            throw RangeError("unsupported function class: constant '" + std::string(expr::name(e.constant_id())) +
                             "' has no exact rational series");
        case NodeKind::Negate: return series_scale(convert(e.operand(), max_exponent), Rational(-1));
        case NodeKind::Add:
            return series_sum(convert(e.lhs(), max_exponent), convert(e.rhs(), max_exponent));
        case NodeKind::Subtract:
            return series_sum(convert(e.lhs(), max_exponent),
                              series_scale(convert(e.rhs(), max_exponent), Rational(-1)));
        case NodeKind::Multiply:
            return truncate_inexact(series_product(convert(e.lhs(), max_exponent), convert(e.rhs(), max_exponent)),
                                    max_exponent);
        case NodeKind::Divide: {
            const RationalSeries den = convert(e.rhs(), max_exponent);
            if (!is_single_term(den))
                throw RangeError("unsupported function class: division by '" + expr::to_string(e.rhs()) +
                                 "', which is not a monomial");
            const RationalSeries inverse =
                RationalSeries::monomial(Rational(1) / den.coeffs().front(), Rational(-den.nu()));
            return truncate_inexact(series_product(convert(e.lhs(), max_exponent), inverse), max_exponent);
        }
        case NodeKind::Power: {
            const RationalSeries base = convert(e.lhs(), max_exponent);
            const RationalSeries exponent = convert(e.rhs(), max_exponent);
            if (!exponent.exact() || exponent.coeffs().size() != 1 || exponent.nu() != 0)
                throw RangeError("unsupported function class: non-constant exponent in '" + expr::to_string(e) + "'");
            const Rational p = exponent.coeffs().front();
            const auto integer_p = SeriesScalar<Rational>::integer_value(p);
            if (is_single_term(base)) {
                const Rational& c = base.coeffs().front();
                if (integer_p) {
                    Rational cp = 1;
                    for (long i = 0; i < std::labs(*integer_p); ++i) cp *= c;
                    if (*integer_p < 0) cp = Rational(1) / cp;
                    return RationalSeries::monomial(cp, Rational(base.nu() * p));
                }
                if (c == 1) return RationalSeries::monomial(Rational(1), Rational(base.nu() * p));
                throw RangeError("unsupported function class: irrational power in '" + expr::to_string(e) + "'");
            }
            if (!integer_p || *integer_p < 0 || *integer_p > 256)
                throw RangeError("unsupported function class: '" + expr::to_string(e) +
                                 "' needs a small nonnegative integer exponent");
            RationalSeries result = RationalSeries::monomial(Rational(1), Rational(0));
            for (long i = 0; i < *integer_p; ++i)
                result = truncate_inexact(series_product(result, base), max_exponent);
            return result;
        }
        case NodeKind::Call: {
            const RationalSeries arg = convert(e.operand(), max_exponent);
            const auto f = e.function_id();
            if (f != expr::Function::Sin && f != expr::Function::Cos && f != expr::Function::Exp)
                throw RangeError("unsupported function class: " + std::string(expr::name(f)));
            if (arg.exact() && arg.is_zero())
                return RationalSeries::monomial(Rational(f == expr::Function::Sin ? 0 : 1), Rational(0));
            const auto valuation = SeriesScalar<Rational>::integer_value(arg.nu());
            if (!valuation || *valuation < 1)
                throw RangeError("unsupported function class: argument of " + std::string(expr::name(f)) +
                                 " must vanish at 0 with integer order");
            return compose(taylor_coefficients(f, static_cast<std::size_t>(max_exponent / *valuation) + 1), arg,
                           max_exponent);
        }
    }
    throw RangeError("series_from_expr: corrupt expression");
}

}  // namespace

RationalSeries series_from_expr(const expr::Expr& e, long max_exponent) {
    if (max_exponent < 1) throw RangeError("series_from_expr: max_exponent must be positive");
    return convert(e, max_exponent);
}

std::string to_string(const RationalSeries& s) {
    if (s.is_zero()) return "0";
    std::ostringstream body;
    bool first = true;
    for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
        const Rational& c = s.coeffs()[i];
        if (c == 0) continue;
        const Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) body << '-';
        } else {
            body << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (i == 0) {
            body << to_string(mag);
        } else {
            if (mag != 1) body << to_string(mag) << '*';
            body << 'x';
            if (i > 1) body << '^' << i;
        }
    }
    if (s.nu() == 0) return body.str();
    std::string prefix = s.nu() == 1 ? "x" : "x^" + to_string(s.nu());
    return prefix + " * (" + body.str() + ")";
}

IndicialRoots indicial_roots(int n, const std::vector<double>& a) {
    if (n < 2) throw RangeError("indicial_roots: order must be at least 2");
    if (a.size() != static_cast<std::size_t>(n))
        throw RangeError("indicial_roots: expected " + std::to_string(n) + " coefficients");

    // sum_k a_k r(r-1)...(r-k+1), a_n = 1, accumulated in ascending powers.
    std::vector<double> poly(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> falling{1.0};
    for (int k = 0; k <= n; ++k) {
        const double ak = k == n ? 1.0 : a[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < falling.size(); ++i) poly[i] += ak * falling[i];
        std::vector<double> next(falling.size() + 1, 0.0);
        for (std::size_t i = 0; i < falling.size(); ++i) {
            next[i + 1] += falling[i];
            next[i] -= static_cast<double>(k) * falling[i];
        }
        falling = std::move(next);
    }

    IndicialRoots out;
    out.polynomial_coeffs = poly;
    if (n == 2) {
        const double b = poly[1];
        const double c = poly[0];
        const std::complex<double> disc = std::sqrt(std::complex<double>(b * b - 4.0 * c, 0.0));
        // q = -(b + sign(b) sqrt(disc)) / 2 avoids cancellation.
        const std::complex<double> q = -0.5 * (b >= 0 ? b + disc : b - disc);
        if (std::abs(q) == 0.0) {
            out.roots = {0.0, 0.0};
        } else {
            out.roots = {q, c / q};
        }
    } else {
        Eigen::VectorXd coeffs(n + 1);
        for (int i = 0; i <= n; ++i) coeffs[i] = poly[static_cast<std::size_t>(i)];
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
        solver.compute(coeffs);
        for (Eigen::Index i = 0; i < solver.roots().size(); ++i) out.roots.push_back(solver.roots()[i]);
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return out;
}

std::complex<double> evaluate_indicial(const IndicialRoots& roots, std::complex<double> r) {
    std::complex<double> v = 0.0;
    for (std::size_t i = roots.polynomial_coeffs.size(); i-- > 0;) v = v * r + roots.polynomial_coeffs[i];
    return v;
}

}  // namespace singode
