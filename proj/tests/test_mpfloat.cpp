#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "escprob/errors.hpp"
#include "escprob/mpfloat.hpp"
#include "fixtures.hpp"

using namespace escprob;
using escprob::testing::TestRng;

namespace {

Rational pow2(long e) {
    return e >= 0 ? Rational(BigInt(1) << static_cast<unsigned long>(e))
                  : Rational(1, BigInt(1) << static_cast<unsigned long>(-e));
}

MPFloat random_value(TestRng& rng, unsigned p, Sign s = Sign::positive, long emax = 80) {
    BigInt sig = 0;
    for (unsigned got = 0; got < p; got += 64) sig = (sig << 64) | rng.next();
    sig >>= (64 - p % 64) % 64;
    sig |= BigInt(1) << (p - 1);
    Rational v(sig);
    long e = rng.range(-emax, emax);
    MPFloat f = from_rational(v * pow2(e), p);
    return s == Sign::negative ? mp_negated(f) : f;
}

// exact check: |fl/ex - 1| <= 2^-(p-1)
bool rel_error_ok(const MPFloat& fl, const Rational& ex, unsigned p) {
    if (ex == 0) return fl.is_zero();
    Rational diff = to_rational(fl) - ex;
    if (diff < 0) diff = -diff;
    Rational mag = ex < 0 ? Rational(-ex) : ex;
    return diff * pow2(static_cast<long>(p) - 1) <= mag;
}

} // namespace

TEST_CASE("precision budget widths") {
    CHECK(PrecisionBudget(Rational(1, 1000000)).bits == 32); // ceil(log2 1e6)+8 = 28 -> floor
    CHECK(PrecisionBudget(pow2(-60)).bits == 68);
    CHECK(PrecisionBudget(pow2(-24)).bits == 32);
    CHECK(PrecisionBudget(pow2(-25)).bits == 33);
    // non-increasing in eps
    Rational eps(1, 2);
    unsigned prev = PrecisionBudget(eps).bits;
    for (int i = 0; i < 100; ++i) {
        eps /= 3;
        unsigned cur = PrecisionBudget(eps).bits;
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("decimal parsing") {
    CHECK(mp_from_decimal("0", 32).is_zero());
    CHECK(mp_from_decimal("0.000e5", 64).is_zero());
    CHECK(mp_from_decimal("-0", 32).is_zero());

    MPFloat half = mp_from_decimal("0.5", 32);
    CHECK(half.sign() == Sign::positive);
    CHECK(half.significand() == BigInt(1) << 31);
    CHECK(half.exponent() == -1);
    CHECK(to_rational(half) == Rational(1, 2));

    MPFloat tiny = mp_from_decimal("1e-120", 64);
    Rational exact = Rational(1) / Rational(pow_int(10, 120));
    CHECK(testing::within_log(tiny, exact, pow2(-63)));
    CHECK(rel_error_ok(tiny, exact, 64));

    MPFloat neg = mp_from_decimal("-12.75", 32);
    CHECK(neg.sign() == Sign::negative);
    CHECK(to_rational(neg) == Rational(-51, 4));

    CHECK_THROWS_AS(mp_from_decimal("", 32), ParseError);
    CHECK_THROWS_AS(mp_from_decimal("1.2.3", 32), ParseError);
    CHECK_THROWS_AS(mp_from_decimal("12e", 32), ParseError);
    CHECK_THROWS_AS(mp_from_decimal("1x", 32), ParseError);
}

TEST_CASE("addition examples") {
    MPFloat a = mp_from_decimal("1.5", 32);
    MPFloat three = mp_add(a, a);
    CHECK(to_rational(three) == Rational(3)); // exactly representable sum

    // p=3: 1.00b + 1.00b*2^-4 rounds back to 1.00b
    MPFloat one3 = MPFloat::one(3);
    MPFloat small = MPFloat::from_scaled(1, -4, 3);
    MPFloat sum = mp_add(one3, small);
    CHECK(mp_cmp(sum, one3) == 0);
    CHECK(sum.precision() == 3);

    // zero handling
    CHECK(mp_cmp(mp_add(MPFloat::zero(32), a), a) == 0);
    CHECK(mp_add(MPFloat::zero(16), MPFloat::zero(16)).is_zero());
    MPFloat na = mp_negated(a);
    CHECK(mp_cmp(mp_add(na, MPFloat::zero(32)), na) == 0); // keeps the nonzero operand's sign

    // the core contract
    std::uint64_t before = sign_violation_count();
    CHECK_THROWS_AS(mp_add(MPFloat::one(32), mp_negated(MPFloat::one(32))), SignDisciplineError);
    CHECK(sign_violation_count() == before + 1);
    // two nonpositives are fine
    MPFloat nsum = mp_add(na, na);
    CHECK(to_rational(nsum) == Rational(-3));
}

TEST_CASE("addition with far-apart exponents is exact RNE") {
    // lo below the sticky horizon: rounds back to hi (not a tie)
    MPFloat hi = MPFloat::one(24);
    MPFloat lo = MPFloat::from_scaled(3, -900000, 24);
    MPFloat r = mp_add(hi, lo);
    CHECK(mp_cmp(r, hi) == 0);
    CHECK(rel_error_ok(r, Rational(1) + to_rational(lo), 24));
}

TEST_CASE("multiplication examples") {
    MPFloat a = MPFloat::from_scaled(3, 10, 32);
    MPFloat b = MPFloat::from_scaled(5, -3, 32);
    CHECK(to_rational(mp_mul(a, b)) == Rational(15) * pow2(7));

    CHECK(mp_mul(a, MPFloat::zero(32)).is_zero());
    CHECK(mp_mul(MPFloat::zero(32), mp_negated(b)).is_zero());

    MPFloat big = mp_from_decimal("1e200", 64);
    MPFloat small = mp_from_decimal("1e-300", 64);
    Rational exact = Rational(1) / Rational(pow_int(10, 100));
    CHECK(testing::within_log(mp_mul(big, small), exact, pow2(-63)));

    // sign table
    CHECK(mp_mul(mp_negated(a), b).sign() == Sign::negative);
    CHECK(mp_mul(mp_negated(a), mp_negated(b)).sign() == Sign::positive);
}

TEST_CASE("division examples") {
    CHECK(to_rational(mp_div(MPFloat::one(32), mp_from_decimal("2", 32))) == Rational(1, 2));
    MPFloat third = mp_div(MPFloat::one(32), mp_from_decimal("3", 32));
    CHECK(testing::within_log(third, Rational(1, 3), pow2(-31)));
    CHECK(rel_error_ok(third, Rational(1, 3), 32));
    CHECK(mp_div(MPFloat::zero(32), mp_from_decimal("7", 32)).is_zero());
    CHECK_THROWS_AS(mp_div(MPFloat::one(32), MPFloat::zero(32)), DivisionByZeroError);
    CHECK(mp_div(mp_negated(MPFloat::one(32)), mp_from_decimal("4", 32)).sign() == Sign::negative);
}

TEST_CASE("comparison is exact across precisions and scales") {
    CHECK(mp_cmp(MPFloat::zero(32), MPFloat::from_scaled(1, -10000, 32)) < 0);
    CHECK(mp_cmp(mp_negated(MPFloat::one(32)), MPFloat::zero(32)) < 0);
    // 1.5 * 2^3 == 3 * 2^2 at different precisions
    CHECK(mp_cmp(MPFloat::from_scaled(3, 2, 8), MPFloat::from_scaled(3, 2, 2)) == 0);
    CHECK(mp_cmp(mp_from_decimal("12", 8), mp_from_decimal("12", 60)) == 0);
    CHECK(mp_cmp(mp_from_decimal("-5", 32), mp_from_decimal("-4", 32)) < 0);
}

TEST_CASE("hex form round-trips losslessly") {
    CHECK(mp_to_hex(MPFloat::zero(32)) == "0");
    CHECK(mp_from_hex("0").is_zero());
    TestRng rng(0xbeef);
    for (int i = 0; i < 500; ++i) {
        unsigned p = static_cast<unsigned>(rng.range(2, 160));
        Sign s = rng.chance(0.5) ? Sign::positive : Sign::negative;
        MPFloat v = random_value(rng, p, s, 5000);
        MPFloat back = mp_from_hex(mp_to_hex(v));
        CHECK(mp_cmp(v, back) == 0);
        CHECK(back.precision() == v.precision());
    }
    CHECK_THROWS_AS(mp_from_hex("aaap3"), ParseError);
    CHECK_THROWS_AS(mp_from_hex("+p3"), ParseError);
    CHECK_THROWS_AS(mp_from_hex("+zzp3"), ParseError);
}

TEST_CASE("decimal rendering") {
    CHECK(mp_to_decimal(mp_from_decimal("0.5", 64), 3) == "0.500");
    CHECK(mp_to_decimal(mp_from_decimal("-1234.5", 64), 5) == "-1234.5");
    CHECK(mp_to_decimal(mp_from_decimal("1", 64), 11) == "1.0000000000");
    CHECK(mp_to_decimal(MPFloat::zero(32), 5) == "0");
    CHECK(mp_to_decimal(mp_from_decimal("1e-120", 96), 4) == "1.000e-120");
    CHECK(mp_to_decimal(mp_from_decimal("6.25e7", 64), 2) == "6.2e+7"); // ties to even
    CHECK(mp_to_decimal(mp_from_decimal("6.26e7", 64), 2) == "6.3e+7");
}

TEST_CASE("relative-error soundness against rationals") {
    // reduced trial count here; the acceptance suite runs the full 1e5
    for (unsigned p : {8u, 24u, 53u, 128u}) {
        TestRng rng(1000 + p);
        for (int trial = 0; trial < 3000; ++trial) {
            Sign s = rng.chance(0.5) ? Sign::positive : Sign::negative;
            MPFloat a = random_value(rng, p, s);
            MPFloat b = random_value(rng, p, s);
            Rational ra = to_rational(a), rb = to_rational(b);
            CHECK(rel_error_ok(mp_add(a, b), ra + rb, p));
            CHECK(rel_error_ok(mp_mul(a, b), ra * rb, p));
            CHECK(rel_error_ok(mp_div(a, b), ra / rb, p));
            // sign exactness
            CHECK(static_cast<int>(mp_mul(a, b).sign()) == (ra * rb > 0 ? 1 : (ra * rb < 0 ? -1 : 0)));
            CHECK(static_cast<int>(mp_add(a, b).sign()) == (ra + rb > 0 ? 1 : (ra + rb < 0 ? -1 : 0)));
        }
    }
}

TEST_CASE("monotonicity over nonnegative operands") {
    for (unsigned p : {8u, 24u, 53u}) {
        TestRng rng(77 + p);
        for (int trial = 0; trial < 3000; ++trial) {
            MPFloat a = random_value(rng, p, Sign::positive, 30);
            MPFloat b = random_value(rng, p, Sign::positive, 30);
            MPFloat da = random_value(rng, p, Sign::positive, 30);
            MPFloat db = random_value(rng, p, Sign::positive, 30);
            // a' >= a, b' >= b: sums are exact at p + 80 bits (values span
            // exponents within +-30, so p + gap + 1 <= p + 61 bits suffice)
            MPFloat a2 = mp_add(mp_round(a, p + 80), mp_round(da, p + 80));
            MPFloat b2 = mp_add(mp_round(b, p + 80), mp_round(db, p + 80));
            CHECK(mp_cmp(mp_add(a, b, p), mp_add(a2, b2, p)) <= 0);
            CHECK(mp_cmp(mp_mul(a, b, p), mp_mul(a2, b2, p)) <= 0);
        }
    }
}

namespace {

// dyadic tracker: exact value = num * 2^e2, cheap adds and muls without
// rational gcd normalization
struct Dyadic {
    BigInt num;
    long e2;

    void add(const BigInt& n, long e) {
        long lo = std::min(e2, e);
        num = (num << static_cast<unsigned long>(e2 - lo)) + (n << static_cast<unsigned long>(e - lo));
        e2 = lo;
    }
    void mul(const BigInt& n, long e) {
        num *= n;
        e2 += e;
    }
    Rational value() const {
        Rational r(num);
        return e2 >= 0 ? r * pow2(e2) : r / pow2(-e2);
    }
};

} // namespace

TEST_CASE("operation chains compose multiplicatively") {
    const unsigned p = 53;
    const Rational delta = pow2(-52);
    TestRng rng(31337);
    // k = 10^4 ops per chain, a multiplication every 16th op
    for (int chain = 0; chain < 6; ++chain) {
        MPFloat x = MPFloat::one(p);
        Dyadic exact{BigInt(1), 0};
        const int k = 10000;
        for (int i = 0; i < k; ++i) {
            MPFloat y = random_value(rng, p, Sign::positive, 2);
            BigInt ynum = y.significand();
            long ye = static_cast<long>(y.exponent()) - static_cast<long>(y.precision()) + 1;
            if (i % 16 == 15) {
                x = mp_mul(x, y);
                exact.mul(ynum, ye);
            } else {
                x = mp_add(x, y);
                exact.add(ynum, ye);
            }
        }
        CHECK(testing::within_log(to_rational(x), exact.value(), Rational(k) * delta));
    }
}

TEST_CASE("rounding to fewer bits is exact RNE") {
    MPFloat v = mp_from_decimal("0.1", 80);
    MPFloat w = mp_round(v, 24);
    CHECK(w.precision() == 24);
    CHECK(rel_error_ok(w, to_rational(v), 24));
    // widening is exact
    CHECK(mp_cmp(mp_round(w, 100), w) == 0);
}

TEST_CASE("op counters track work") {
    reset_op_counts();
    MPFloat a = mp_from_decimal("2.5", 40);
    mp_add(a, a);
    mp_mul(a, a);
    mp_div(a, a);
    OpCounts c = op_counts();
    CHECK(c.adds == 1);
    CHECK(c.muls == 1);
    CHECK(c.divs == 1);
    CHECK(c.total() == 3);
    CHECK(c.bit_work == 120);
    CHECK(c.max_bits == 40);
}
