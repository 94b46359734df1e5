#include "escprob/rational.hpp"
#include "escprob/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <utility>

namespace escprob {

unsigned long bit_length(const BigInt& x) {
    if (x == 0) return 0;
    return static_cast<unsigned long>(boost::multiprecision::msb(x)) + 1;
}

namespace {

// q = num/den > 0. Finds k with 2^(k-1) < q <= 2^k (ceil) by bit-length
// estimate plus local adjustment.
long ceil_log2_frac(const BigInt& num, const BigInt& den) {
    long k = static_cast<long>(bit_length(num)) - static_cast<long>(bit_length(den));
    auto le_pow2 = [&](long e) {
        // num/den <= 2^e ?
        if (e >= 0) return num <= (den << static_cast<unsigned long>(e));
        return (num << static_cast<unsigned long>(-e)) <= den;
    };
    while (!le_pow2(k)) ++k;
    while (k > std::numeric_limits<long>::min() && le_pow2(k - 1)) --k;
    return k;
}

} // namespace

long ceil_log2(const Rational& q) {
    if (q <= 0) throw Error("ceil_log2: nonpositive argument");
    return ceil_log2_frac(numerator(q), denominator(q));
}

long floor_log2(const Rational& q) {
    long c = ceil_log2(q);
    // floor == ceil iff q is an exact power of two.
    Rational p2 = c >= 0 ? Rational(BigInt(1) << static_cast<unsigned long>(c))
                         : Rational(1, BigInt(1) << static_cast<unsigned long>(-c));
    return q == p2 ? c : c - 1;
}

BigInt pow_int(const BigInt& base, unsigned long e) {
    BigInt r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

double approx_ln(const Rational& q) {
    if (q <= 0) throw Error("approx_ln: nonpositive argument");
    auto part = [](const BigInt& x) {
        // x = m * 2^s with m in [2^52, 2^53)
        if (x == 0) return std::pair<double, long>(0.0, 0);
        long bl = static_cast<long>(bit_length(x));
        long shift = bl - 53;
        BigInt m = shift >= 0 ? BigInt(x >> static_cast<unsigned long>(shift))
                              : BigInt(x << static_cast<unsigned long>(-shift));
        return std::pair<double, long>(static_cast<double>(m), shift);
    };
    auto [mn, sn] = part(numerator(q));
    auto [md, sd] = part(denominator(q));
    static const double ln2 = 0.6931471805599453;
    return std::log(mn) - std::log(md) + ln2 * static_cast<double>(sn - sd);
}

Rational rational_from_decimal(std::string_view text) {
    std::size_t i = 0;
    auto fail = [&](const char* msg) -> Rational {
        throw ParseError(std::string("bad decimal literal '") + std::string(text) + "': " + msg);
    };
    if (text.empty()) return fail("empty");
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    BigInt digits = 0;
    long frac_digits = 0;
    bool any_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_dot) return fail("two decimal points");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits = digits * 10 + (c - '0');
            if (seen_dot) ++frac_digits;
            any_digit = true;
        } else {
            break;
        }
    }
    if (!any_digit) return fail("no digits");
    long exp10 = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            eneg = text[i] == '-';
            ++i;
        }
        if (i >= text.size()) return fail("empty exponent");
        long e = 0;
        for (; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) return fail("bad exponent digit");
            e = e * 10 + (text[i] - '0');
            if (e > 100000000L) return fail("exponent out of range");
        }
        exp10 = eneg ? -e : e;
    }
    if (i != text.size()) return fail("trailing characters");
    long net = exp10 - frac_digits;
    Rational r(digits);
    if (net > 0)
        r *= Rational(pow_int(10, static_cast<unsigned long>(net)));
    else if (net < 0)
        r /= Rational(pow_int(10, static_cast<unsigned long>(-net)));
    return neg ? -r : r;
}

DecimalDigits decimal_digits(const Rational& r, unsigned d) {
    if (r == 0 || d == 0) throw Error("decimal_digits: zero value or zero digits");
    Rational a = r < 0 ? Rational(-r) : r;
    // exp10 = floor(log10 a), estimated from floor(log2 a) then adjusted.
    long e2 = floor_log2(a);
    long k = static_cast<long>(std::floor(static_cast<double>(e2) * 0.30102999566398120)) - 1;
    auto ge_pow10 = [&](long e) {
        // a >= 10^e ?
        if (e >= 0) return a >= Rational(pow_int(10, static_cast<unsigned long>(e)));
        return a * Rational(pow_int(10, static_cast<unsigned long>(-e))) >= 1;
    };
    while (ge_pow10(k + 1)) ++k;
    while (!ge_pow10(k)) --k;

    // scaled = a * 10^(d-1-k), rounded half to even to an integer.
    long s = static_cast<long>(d) - 1 - k;
    BigInt num = numerator(a), den = denominator(a);
    if (s > 0)
        num *= pow_int(10, static_cast<unsigned long>(s));
    else if (s < 0)
        den *= pow_int(10, static_cast<unsigned long>(-s));
    BigInt q, rem;
    boost::multiprecision::divide_qr(num, den, q, rem);
    BigInt twice = rem << 1;
    if (twice > den || (twice == den && boost::multiprecision::bit_test(q, 0))) ++q;
    BigInt cap = pow_int(10, d);
    if (q == cap) {
        q /= 10;
        ++k;
    }
    std::string digits = q.str();
    while (digits.size() < d) digits.insert(digits.begin(), '0');
    return {digits, k};
}

std::string rational_to_decimal(const Rational& r, unsigned d) {
    if (r == 0) return "0";
    auto [digits, k] = decimal_digits(r, d);
    std::string out = r < 0 ? "-" : "";
    long dl = static_cast<long>(digits.size());
    if (k >= -4 && k <= dl + 2) {
        if (k >= 0) {
            if (k + 1 >= dl) {
                out += digits;
                out.append(static_cast<std::size_t>(k + 1 - dl), '0');
            } else {
                out += digits.substr(0, static_cast<std::size_t>(k + 1));
                out += '.';
                out += digits.substr(static_cast<std::size_t>(k + 1));
            }
        } else {
            out += "0.";
            out.append(static_cast<std::size_t>(-k - 1), '0');
            out += digits;
        }
    } else {
        out += digits.substr(0, 1);
        if (dl > 1) {
            out += '.';
            out += digits.substr(1);
        }
        out += 'e';
        if (k >= 0) out += '+';
        out += std::to_string(k);
    }
    return out;
}

} // namespace escprob
