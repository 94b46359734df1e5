#ifndef ESCPROB_MPFLOAT_HPP
#define ESCPROB_MPFLOAT_HPP

#include "escprob/rational.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace escprob {

enum class Sign : int { negative = -1, zero = 0, positive = 1 };

inline Sign sign_product(Sign a, Sign b) {
    return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b));
}

// Maps a multiplicative error target eps to a significand width:
// p = max(32, ceil(log2(1/eps)) + 8). Every arithmetic op at width p has
// relative error <= 2^-(p-1) <= eps/128, so op-chain bookkeeping done in
// eps units always has slack.
struct PrecisionBudget {
    Rational eps;
    unsigned bits;

    explicit PrecisionBudget(const Rational& eps_);
};

// Arbitrary-precision binary float: sign * significand * 2^(exponent-p+1),
// significand normalized to exactly p bits (top bit set). Zero is the
// unique value with sign == Sign::zero. The exponent is a big integer, so
// magnitudes like 2^(-poly(n)) are representable without overflow.
//
// Every operation rounds to nearest, ties to even, giving a multiplicative
// error factor within [e^-d, e^d], d = 2^-(p-1), for same-sign inputs.
// Addition of a positive and a negative value is a contract violation and
// throws SignDisciplineError; there is deliberately no subtraction.
//
// Values are immutable after construction; all operations are pure.
class MPFloat {
public:
    MPFloat() : sign_(Sign::zero), prec_(32) {}

    static MPFloat zero(unsigned p = 32);
    static MPFloat one(unsigned p);
    static MPFloat from_unsigned(std::uint64_t v, unsigned p);
    // value = v * 2^e2, exact if v fits in p bits.
    static MPFloat from_scaled(std::int64_t v, long e2, unsigned p);

    Sign sign() const { return sign_; }
    bool is_zero() const { return sign_ == Sign::zero; }
    bool is_negative() const { return sign_ == Sign::negative; }
    unsigned precision() const { return prec_; }
    // Exponent of the most significant bit; meaningless for zero.
    const BigInt& exponent() const { return exp_; }
    const BigInt& significand() const { return sig_; }

    friend MPFloat mp_add(const MPFloat& a, const MPFloat& b, unsigned p);
    friend MPFloat mp_mul(const MPFloat& a, const MPFloat& b, unsigned p);
    friend MPFloat mp_div(const MPFloat& a, const MPFloat& b, unsigned p);
    friend int mp_cmp(const MPFloat& a, const MPFloat& b);
    friend MPFloat mp_round(const MPFloat& a, unsigned p);
    friend MPFloat mp_negated(const MPFloat& a);
    friend Rational to_rational(const MPFloat& a);
    friend MPFloat from_rational(const Rational& r, unsigned p);
    friend MPFloat mp_from_hex(std::string_view text);

private:
    Sign sign_;
    BigInt sig_; // in [2^(p-1), 2^p) for nonzero values
    BigInt exp_;
    unsigned prec_;

    // value = s * mag * 2^lsb (+ tau, 0 < tau < 2^lsb, iff sticky), rounded
    // to p bits. When sticky is set, mag must carry at least p+2 bits.
    static MPFloat normalized(Sign s, BigInt mag, BigInt lsb, unsigned p, bool sticky);
};

// Same-sign addition (either operand may be zero). Mixed signs throw
// SignDisciplineError. Result precision max(p_a, p_b) unless given.
MPFloat mp_add(const MPFloat& a, const MPFloat& b, unsigned p = 0);
MPFloat mp_mul(const MPFloat& a, const MPFloat& b, unsigned p = 0);
MPFloat mp_div(const MPFloat& a, const MPFloat& b, unsigned p = 0);
// Exact total order by represented value: -1, 0, or +1.
int mp_cmp(const MPFloat& a, const MPFloat& b);
// Re-round to p significand bits (exact if p >= precision).
MPFloat mp_round(const MPFloat& a, unsigned p);
// Structural sign flip; exact, not an arithmetic op.
MPFloat mp_negated(const MPFloat& a);

Rational to_rational(const MPFloat& a);
// Nearest p-bit float to r (ties to even); sign exact.
MPFloat from_rational(const Rational& r, unsigned p);

// Decimal or scientific literal -> nearest p-bit float; "0" parses to the
// exact zero; sign is exact.
MPFloat mp_from_decimal(std::string_view text, const PrecisionBudget& budget);
MPFloat mp_from_decimal(std::string_view text, unsigned p);

// Scientific decimal rendering with the given count of significant digits.
std::string mp_to_decimal(const MPFloat& a, unsigned digits);

// Lossless round-trip form: sign, hex significand, 'p', decimal exponent
// of the least significant bit ("+aaaap-17"); "0" for zero.
std::string mp_to_hex(const MPFloat& a);
MPFloat mp_from_hex(std::string_view text);

// Global op instrumentation (relaxed atomics; cheap). bit_work accumulates
// the result precision of each op as a proxy for significand bit cost.
struct OpCounts {
    std::uint64_t adds = 0;
    std::uint64_t muls = 0;
    std::uint64_t divs = 0;
    std::uint64_t bit_work = 0;
    std::uint64_t max_bits = 0;

    std::uint64_t total() const { return adds + muls + divs; }
};

OpCounts op_counts();
void reset_op_counts();

} // namespace escprob

#endif
