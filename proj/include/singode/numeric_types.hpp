#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <string_view>

namespace singode {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
/// Variable-precision real; precision follows the thread default set by ScopedPrecision.
using BigReal = boost::multiprecision::mpfr_float;

/// Working precision in bits. 53 selects plain double arithmetic.
struct Precision {
    unsigned bits = 53;

    bool is_native() const noexcept { return bits <= 53; }
    unsigned digits10() const noexcept;
};

/// Sets the BigReal default precision for the current thread and restores it on exit.
class ScopedPrecision {
public:
    explicit ScopedPrecision(Precision precision);
    ~ScopedPrecision();

    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_digits10_;
};

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Correctly rounded conversion.
double to_double(const Rational& q);
long double to_long_double(const Rational& q);

/// Exact binary value of a finite double.
Rational exact_rational(double value);

/// Exact value of a decimal literal such as "0.18394" or "1.5e-3".
Rational parse_decimal(std::string_view text);

/// Rational enclosure [lo, hi] of Euler's number from 300 series terms; hi - lo < 1e-600.
struct EulerEnclosure {
    Rational lo;
    Rational hi;
};
const EulerEnclosure& euler_enclosure();

}  // namespace singode
