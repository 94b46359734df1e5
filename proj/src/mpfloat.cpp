#include "escprob/mpfloat.hpp"
#include "escprob/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <limits>

namespace escprob {

namespace {

std::atomic<std::uint64_t> g_adds{0}, g_muls{0}, g_divs{0}, g_bit_work{0}, g_max_bits{0};
std::atomic<std::uint64_t> g_sign_violations{0};

void count_op(std::atomic<std::uint64_t>& which, unsigned p) {
    which.fetch_add(1, std::memory_order_relaxed);
    g_bit_work.fetch_add(p, std::memory_order_relaxed);
    std::uint64_t prev = g_max_bits.load(std::memory_order_relaxed);
    while (prev < p && !g_max_bits.compare_exchange_weak(prev, p, std::memory_order_relaxed)) {
    }
}

unsigned result_precision(const MPFloat& a, const MPFloat& b, unsigned p) {
    if (p != 0) return p;
    return std::max(a.precision(), b.precision());
}

} // namespace

std::uint64_t sign_violation_count() { return g_sign_violations.load(); }

namespace detail {
void record_sign_violation() { g_sign_violations.fetch_add(1); }
}

OpCounts op_counts() {
    OpCounts c;
    c.adds = g_adds.load();
    c.muls = g_muls.load();
    c.divs = g_divs.load();
    c.bit_work = g_bit_work.load();
    c.max_bits = g_max_bits.load();
    return c;
}

void reset_op_counts() {
    g_adds = 0;
    g_muls = 0;
    g_divs = 0;
    g_bit_work = 0;
    g_max_bits = 0;
}

PrecisionBudget::PrecisionBudget(const Rational& eps_) : eps(eps_) {
    if (eps <= 0) throw Error("PrecisionBudget: eps must be positive");
    long needed = eps < 1 ? ceil_log2(Rational(1) / eps) : 0;
    long bits_l = std::max<long>(32, needed + 8);
    bits = static_cast<unsigned>(bits_l);
}

MPFloat MPFloat::normalized(Sign s, BigInt mag, BigInt lsb, unsigned p, bool sticky) {
    MPFloat r;
    if (mag == 0) {
        // Only exact zeros may be produced; the sticky path never sees 0.
        return r;
    }
    unsigned long L = bit_length(mag);
    r.sign_ = s;
    r.prec_ = p;
    if (L <= p) {
        // Exact, pad up to p bits. sticky would need >= p+2 bits of mag.
        r.sig_ = mag << (p - L);
        r.exp_ = lsb + static_cast<long>(L) - 1;
        return r;
    }
    unsigned long d = L - p;
    BigInt q = mag >> d;
    BigInt rem = mag - (q << d);
    BigInt half = BigInt(1) << (d - 1);
    bool up = rem > half || (rem == half && (sticky || boost::multiprecision::bit_test(q, 0)));
    long exp_adjust = 0;
    if (up) {
        ++q;
        if (bit_length(q) > p) {
            q >>= 1;
            exp_adjust = 1;
        }
    }
    r.sig_ = std::move(q);
    r.exp_ = lsb + static_cast<long>(L) - 1 + exp_adjust;
    return r;
}

MPFloat MPFloat::zero(unsigned p) {
    MPFloat r;
    r.prec_ = p;
    return r;
}

MPFloat MPFloat::one(unsigned p) { return from_unsigned(1, p); }

MPFloat MPFloat::from_unsigned(std::uint64_t v, unsigned p) {
    if (v == 0) return zero(p);
    return normalized(Sign::positive, BigInt(v), BigInt(0), p, false);
}

MPFloat MPFloat::from_scaled(std::int64_t v, long e2, unsigned p) {
    if (v == 0) return zero(p);
    Sign s = v < 0 ? Sign::negative : Sign::positive;
    BigInt mag = v < 0 ? BigInt(-(v + 1)) + 1 : BigInt(v);
    return normalized(s, mag, BigInt(e2), p, false);
}

MPFloat mp_round(const MPFloat& a, unsigned p) {
    if (a.is_zero()) return MPFloat::zero(p);
    return MPFloat::normalized(a.sign_, a.sig_, a.exp_ - static_cast<long>(a.prec_) + 1, p, false);
}

MPFloat mp_negated(const MPFloat& a) {
    MPFloat r = a;
    r.sign_ = static_cast<Sign>(-static_cast<int>(r.sign_));
    return r;
}

MPFloat mp_add(const MPFloat& a, const MPFloat& b, unsigned p) {
    p = result_precision(a, b, p);
    count_op(g_adds, p);
    if (static_cast<int>(a.sign()) * static_cast<int>(b.sign()) < 0) {
        detail::record_sign_violation();
        throw SignDisciplineError("mp_add: operands have opposite signs");
    }
    if (a.is_zero()) return mp_round(b, p);
    if (b.is_zero()) return mp_round(a, p);

    const MPFloat* hi = &a;
    const MPFloat* lo = &b;
    if (hi->exp_ < lo->exp_) std::swap(hi, lo);

    BigInt lsb_hi = hi->exp_ - static_cast<long>(hi->prec_) + 1;
    BigInt lsb_lo = lo->exp_ - static_cast<long>(lo->prec_) + 1;

    // Far-apart operands: lo only contributes a sticky bit. Guard pad G
    // keeps >= p+3 bits in the magnitude so rounding stays exact RNE.
    unsigned long G = hi->prec_ >= p + 3 ? 2 : (p + 5 - hi->prec_);
    if (lo->exp_ < lsb_hi - static_cast<long>(G)) {
        return MPFloat::normalized(hi->sign_, hi->sig_ << G, lsb_hi - static_cast<long>(G), p, true);
    }

    BigInt shift_b = lsb_hi - lsb_lo; // may be negative despite exp order
    BigInt mag, lsb;
    if (shift_b >= 0) {
        unsigned long sh = static_cast<unsigned long>(shift_b);
        mag = (hi->sig_ << sh) + lo->sig_;
        lsb = lsb_lo;
    } else {
        unsigned long sh = static_cast<unsigned long>(-shift_b);
        mag = hi->sig_ + (lo->sig_ << sh);
        lsb = lsb_hi;
    }
    return MPFloat::normalized(hi->sign_, std::move(mag), std::move(lsb), p, false);
}

MPFloat mp_mul(const MPFloat& a, const MPFloat& b, unsigned p) {
    p = result_precision(a, b, p);
    count_op(g_muls, p);
    if (a.is_zero() || b.is_zero()) return MPFloat::zero(p);
    Sign s = sign_product(a.sign_, b.sign_);
    BigInt mag = a.sig_ * b.sig_;
    BigInt lsb = (a.exp_ - static_cast<long>(a.prec_) + 1) + (b.exp_ - static_cast<long>(b.prec_) + 1);
    return MPFloat::normalized(s, std::move(mag), std::move(lsb), p, false);
}

MPFloat mp_div(const MPFloat& a, const MPFloat& b, unsigned p) {
    p = result_precision(a, b, p);
    count_op(g_divs, p);
    if (b.is_zero()) throw DivisionByZeroError("mp_div: division by zero");
    if (a.is_zero()) return MPFloat::zero(p);
    Sign s = sign_product(a.sign_, b.sign_);
    // Scale the dividend so the integer quotient carries >= p+3 bits; the
    // remainder only feeds the sticky bit.
    unsigned long D = p + 3 + b.prec_;
    BigInt num = a.sig_ << D;
    BigInt q, rem;
    boost::multiprecision::divide_qr(num, b.sig_, q, rem);
    BigInt lsb = (a.exp_ - static_cast<long>(a.prec_) + 1) - (b.exp_ - static_cast<long>(b.prec_) + 1) -
                 static_cast<long>(D);
    return MPFloat::normalized(s, std::move(q), std::move(lsb), p, rem != 0);
}

int mp_cmp(const MPFloat& a, const MPFloat& b) {
    int sa = static_cast<int>(a.sign());
    int sb = static_cast<int>(b.sign());
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    int mag_cmp;
    if (a.exp_ != b.exp_) {
        mag_cmp = a.exp_ < b.exp_ ? -1 : 1;
    } else if (a.prec_ == b.prec_) {
        mag_cmp = a.sig_ == b.sig_ ? 0 : (a.sig_ < b.sig_ ? -1 : 1);
    } else if (a.prec_ < b.prec_) {
        BigInt as = a.sig_ << (b.prec_ - a.prec_);
        mag_cmp = as == b.sig_ ? 0 : (as < b.sig_ ? -1 : 1);
    } else {
        BigInt bs = b.sig_ << (a.prec_ - b.prec_);
        mag_cmp = a.sig_ == bs ? 0 : (a.sig_ < bs ? -1 : 1);
    }
    return sa > 0 ? mag_cmp : -mag_cmp;
}

Rational to_rational(const MPFloat& a) {
    if (a.is_zero()) return Rational(0);
    BigInt lsb = a.exp_ - static_cast<long>(a.prec_) + 1;
    if (lsb > std::numeric_limits<long>::max() / 2 || lsb < std::numeric_limits<long>::min() / 2)
        throw Error("to_rational: exponent too large to materialize");
    long e = static_cast<long>(lsb);
    Rational r(a.sig_);
    if (e >= 0)
        r *= Rational(BigInt(1) << static_cast<unsigned long>(e));
    else
        r /= Rational(BigInt(1) << static_cast<unsigned long>(-e));
    return a.sign_ == Sign::negative ? Rational(-r) : r;
}

MPFloat from_rational(const Rational& r, unsigned p) {
    if (r == 0) return MPFloat::zero(p);
    Sign s = r < 0 ? Sign::negative : Sign::positive;
    BigInt num = boost::multiprecision::abs(numerator(r));
    BigInt den = denominator(r);
    // Quotient with >= p+3 bits plus sticky remainder.
    long shift = static_cast<long>(p) + 4 + static_cast<long>(bit_length(den)) - static_cast<long>(bit_length(num));
    if (shift < 0) shift = 0;
    BigInt q, rem;
    boost::multiprecision::divide_qr(num << static_cast<unsigned long>(shift), den, q, rem);
    return MPFloat::normalized(s, std::move(q), BigInt(-shift), p, rem != 0);
}

MPFloat mp_from_decimal(std::string_view text, const PrecisionBudget& budget) {
    return mp_from_decimal(text, budget.bits);
}

MPFloat mp_from_decimal(std::string_view text, unsigned p) {
    Rational r = rational_from_decimal(text);
    return from_rational(r, p);
}

std::string mp_to_decimal(const MPFloat& a, unsigned digits) {
    if (a.is_zero()) return "0";
    return rational_to_decimal(to_rational(a), digits);
}

std::string mp_to_hex(const MPFloat& a) {
    if (a.is_zero()) return "0";
    std::string out = a.is_negative() ? "-" : "+";
    BigInt sig = a.significand();
    std::string hex;
    static const char* digits = "0123456789abcdef";
    BigInt x = sig;
    while (x != 0) {
        hex += digits[static_cast<unsigned>(x & 0xf)];
        x >>= 4;
    }
    std::reverse(hex.begin(), hex.end());
    out += hex;
    out += 'p';
    BigInt lsb = a.exponent() - static_cast<long>(a.precision()) + 1;
    out += lsb.str();
    return out;
}

MPFloat mp_from_hex(std::string_view text) {
    if (text == "0") return MPFloat::zero();
    auto fail = [&]() -> MPFloat {
        throw ParseError("bad hex float '" + std::string(text) + "'");
    };
    if (text.size() < 4) return fail();
    Sign s;
    if (text[0] == '+')
        s = Sign::positive;
    else if (text[0] == '-')
        s = Sign::negative;
    else
        return fail();
    std::size_t pi = text.find('p', 1);
    if (pi == std::string_view::npos || pi == 1 || pi + 1 >= text.size()) return fail();
    BigInt sig = 0;
    for (std::size_t i = 1; i < pi; ++i) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else
            return fail();
        sig = (sig << 4) | v;
    }
    if (sig == 0) return fail();
    BigInt lsb;
    try {
        lsb = BigInt(std::string(text.substr(pi + 1)));
    } catch (const std::exception&) {
        return fail();
    }
    unsigned p = static_cast<unsigned>(bit_length(sig));
    return MPFloat::normalized(s, std::move(sig), std::move(lsb), p, false);
}

} // namespace escprob
