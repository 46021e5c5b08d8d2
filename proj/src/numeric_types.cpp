#include "singode/numeric_types.hpp"

#include "singode/error.hpp"

#include <cmath>
#include <cstdlib>

namespace singode {

unsigned Precision::digits10() const noexcept {
    // 0.30103 ~ log10(2); one guard digit.
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

ScopedPrecision::ScopedPrecision(Precision precision)
    : saved_digits10_(BigReal::default_precision()) {
    BigReal::default_precision(precision.digits10());
}

ScopedPrecision::~ScopedPrecision() { BigReal::default_precision(saved_digits10_); }

std::string to_string(const Rational& q) {
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& q) {
    // mpq -> mpfr at 53 bits rounds to nearest once.
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<17>> r(q);
    return r.convert_to<double>();
}

long double to_long_double(const Rational& q) {
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<21>> r(q);
    return r.convert_to<long double>();
}

Rational exact_rational(double value) {
    if (!std::isfinite(value)) throw RangeError("exact_rational: non-finite value");
    int exponent = 0;
    const double mantissa = std::frexp(value, &exponent);
    // mantissa * 2^53 is an integer.
    const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
    Rational result = Rational(BigInt(scaled));
    const int shift = exponent - 53;
    BigInt power = 1;
    power <<= static_cast<unsigned>(std::abs(shift));
    if (shift >= 0) return result * Rational(power);
    return result / Rational(power);
}

Rational parse_decimal(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    BigInt digits = 0;
    long long scale = 0;
    bool any_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            any_digit = true;
            if (seen_point) --scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) throw RangeError("parse_decimal: no digits in '" + std::string(text) + "'");
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
        long long exponent = 0;
        bool any_exp = false;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
            exponent = exponent * 10 + (text[i] - '0');
            any_exp = true;
            if (exponent > 100000) throw RangeError("parse_decimal: exponent too large");
        }
        if (!any_exp) throw RangeError("parse_decimal: malformed exponent in '" + std::string(text) + "'");
        scale += exp_negative ? -exponent : exponent;
    }
    if (i != text.size()) throw RangeError("parse_decimal: trailing characters in '" + std::string(text) + "'");
    BigInt power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::llabs(scale)));
    Rational value = scale >= 0 ? Rational(digits * power) : Rational(digits, power);
    return negative ? Rational(-value) : value;
}

const EulerEnclosure& euler_enclosure() {
    static const EulerEnclosure enclosure = [] {
        // Far tighter than 50 digits so that B_n < lo is decidable for n well past 200.
        constexpr int kTerms = 300;
        Rational sum = 0;
        Rational term = 1;
        for (int m = 0; m < kTerms; ++m) {
            if (m > 0) term /= m;
            sum += term;
        }
        // term = 1/(kTerms-1)!; the remainder sum_{k>=kTerms} 1/k! is below 2/kTerms!.
        const Rational tail = 2 * term / Rational(kTerms);
        return EulerEnclosure{sum, sum + tail};
    }();
    return enclosure;
}

}  // namespace singode
