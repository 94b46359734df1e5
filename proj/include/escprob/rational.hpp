#ifndef ESCPROB_RATIONAL_HPP
#define ESCPROB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace escprob {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational. cpp_rational keeps gcd(|num|, den) = 1 and den > 0 by
// construction, which is exactly the invariant the oracle needs.
using Rational = boost::multiprecision::cpp_rational;

// Number of bits of a positive integer (msb index + 1); 0 for zero.
unsigned long bit_length(const BigInt& x);

// Smallest k with q <= 2^k, for q > 0. Exact.
long ceil_log2(const Rational& q);

// Largest k with 2^k <= q, for q > 0. Exact.
long floor_log2(const Rational& q);

BigInt pow_int(const BigInt& base, unsigned long e);

// |ln(q)| contributions are needed only for test assertions with generous
// margins; this returns ln(q) for q > 0 with ~1e-14 relative accuracy by
// msb-normalizing num and den into doubles.
double approx_ln(const Rational& q);

// Parses a signed decimal / scientific literal ("3", "-0.25", "1e-120")
// into an exact rational. Throws ParseError on malformed input.
Rational rational_from_decimal(std::string_view text);

// d significant decimal digits of r (r != 0), round half to even.
// Returns the digit string (length d, no sign) and the power-of-ten
// exponent of the leading digit.
struct DecimalDigits {
    std::string digits;
    long exp10;
};
DecimalDigits decimal_digits(const Rational& r, unsigned d);

// Human-readable rendering with d significant digits: positional for
// moderate exponents, scientific otherwise. "0" for zero.
std::string rational_to_decimal(const Rational& r, unsigned d);

} // namespace escprob

#endif
