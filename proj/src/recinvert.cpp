#include "escprob/recinvert.hpp"
#include "escprob/errors.hpp"

namespace escprob {

namespace {

Rational pow7(int m) {
    Rational r(m);
    Rational m2 = r * r;
    return m2 * m2 * m2 * r;
}

// Per-entry op-chain bounds for the budget lines; each op then runs at
// PrecisionBudget(line_budget / K), so the line's total multiplicative
// error stays within its budget.
long k_ptilde(int m) { return m + 1; }
long k_schur(int m) { return 4L * m + 2; }
long k_assemble(int m) { return 8L * m + 4; }

ScheduleLevel make_level(int m, const Rational& eps) {
    ScheduleLevel lv;
    lv.m = m;
    lv.eps = eps;
    if (m == 1) {
        lv.bits_base = PrecisionBudget(eps).bits;
        return lv;
    }
    Rational m7 = pow7(m);
    Rational m8 = m7 * m;
    lv.ptilde_budget = eps / (160 * m8);
    lv.f_call = eps / (80 * m7);
    lv.schur_form = eps / (40 * m7);
    lv.schur_call = eps / (20 * m7);
    lv.assemble = eps / (5 * m);
    lv.bits_ptilde = PrecisionBudget(lv.ptilde_budget / k_ptilde(m)).bits;
    lv.bits_schur = PrecisionBudget(lv.schur_form / k_schur(m)).bits;
    lv.bits_assemble = PrecisionBudget(lv.assemble / k_assemble(m)).bits;
    return lv;
}

MPMatrix submatrix(const MPMatrix& a, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
    MPMatrix s(r1 - r0, c1 - c0);
    for (std::size_t i = r0; i < r1; ++i)
        for (std::size_t j = c0; j < c1; ++j) s(i - r0, j - c0) = a(i, j);
    return s;
}

InverseApprox rec_invert_impl(const RDDLSystem& sys, const Rational& eps) {
    const int m = sys.m;
    if (m < 1) throw InvalidQueryError("rec_invert: empty system");
    ScheduleLevel lv = make_level(m, eps);

    if (m == 1) {
        if (sys.excess_mag[0].is_zero())
            throw SingularError("rec_invert: zero excess at 1x1 base; system not connected to the dummy vertex");
        InverseApprox out;
        out.z = MPMatrix(1, 1);
        out.z(0, 0) = mp_div(MPFloat::one(lv.bits_base), sys.excess_mag[0], lv.bits_base);
        out.eps_achieved = eps;
        return out;
    }

    const auto mf = static_cast<std::size_t>((m + 1) / 2);
    const auto mc = static_cast<std::size_t>(m) - mf;
    const auto mm = static_cast<std::size_t>(m);

    MPMatrix off_ff = submatrix(sys.offdiag_mag, 0, mf, 0, mf);
    MPMatrix off_fc = submatrix(sys.offdiag_mag, 0, mf, mf, mm);
    MPMatrix off_cf = submatrix(sys.offdiag_mag, mf, mm, 0, mf);
    MPMatrix off_cc = submatrix(sys.offdiag_mag, mf, mm, mf, mm);

    // p~ = v_F + M_FC 1 : in magnitudes a same-sign accumulation.
    RDDLSystem fsys;
    fsys.m = static_cast<int>(mf);
    fsys.offdiag_mag = off_ff;
    fsys.excess_mag.assign(mf, MPFloat::zero(lv.bits_ptilde));
    for (std::size_t i = 0; i < mf; ++i) {
        MPFloat acc = mp_round(sys.excess_mag[i], lv.bits_ptilde);
        for (std::size_t j = 0; j < mc; ++j) acc = mp_add(acc, off_fc(i, j), lv.bits_ptilde);
        fsys.excess_mag[i] = std::move(acc);
    }

    InverseApprox zff = rec_invert_impl(fsys, lv.f_call);

    // S_offdiag = M_CC - M_CF Z(FF) M_FC and u~ = v_C - M_CF Z(FF) v_F:
    // M_CF Z M_FC and M_CF Z v_F are nonnegative (two structural
    // negations), so in magnitudes both lines are pure accumulations.
    const unsigned pb = lv.bits_schur;
    MPMatrix t1 = mat_mul(off_cf, zff.z, pb); // mc x mf, >= 0
    MPMatrix prod = mat_mul(t1, off_fc, pb);  // mc x mc, >= 0
    RDDLSystem csys;
    csys.m = static_cast<int>(mc);
    csys.offdiag_mag = MPMatrix(mc, mc, MPFloat::zero(pb));
    for (std::size_t i = 0; i < mc; ++i)
        for (std::size_t j = 0; j < mc; ++j) {
            if (i == j) continue; // Schur diagonal is implied by u~
            csys.offdiag_mag(i, j) = mp_add(off_cc(i, j), prod(i, j), pb);
        }
    csys.excess_mag.assign(mc, MPFloat::zero(pb));
    {
        MPVector vf(mf);
        for (std::size_t i = 0; i < mf; ++i) vf[i] = sys.excess_mag[i];
        MPVector leak = mat_vec(t1, vf, pb); // M_CF Z(FF) v_F in magnitudes
        for (std::size_t i = 0; i < mc; ++i)
            csys.excess_mag[i] = mp_add(mp_round(sys.excess_mag[mf + i], pb), leak[i], pb);
    }

    InverseApprox zcc = rec_invert_impl(csys, lv.schur_call);

    // Block inverse; every term is nonnegative because M_FC and M_CF each
    // carry exactly one structural negation.
    const unsigned pa = lv.bits_assemble;
    MPMatrix w = mat_mul(off_cf, zff.z, pa);   // mc x mf
    MPMatrix e = mat_mul(zff.z, off_fc, pa);   // mf x mc
    MPMatrix g = mat_mul(e, zcc.z, pa);        // top-right block
    MPMatrix gw = mat_mul(g, w, pa);           // correction for top-left
    MPMatrix bl = mat_mul(zcc.z, w, pa);       // bottom-left block

    InverseApprox out;
    out.z = MPMatrix(mm, mm, MPFloat::zero(pa));
    for (std::size_t i = 0; i < mf; ++i)
        for (std::size_t j = 0; j < mf; ++j) out.z(i, j) = mp_add(mp_round(zff.z(i, j), pa), gw(i, j), pa);
    for (std::size_t i = 0; i < mf; ++i)
        for (std::size_t j = 0; j < mc; ++j) out.z(i, mf + j) = g(i, j);
    for (std::size_t i = 0; i < mc; ++i)
        for (std::size_t j = 0; j < mf; ++j) out.z(mf + i, j) = bl(i, j);
    for (std::size_t i = 0; i < mc; ++i)
        for (std::size_t j = 0; j < mc; ++j) out.z(mf + i, mf + j) = mp_round(zcc.z(i, j), pa);
    out.eps_achieved = eps;
    return out;
}

} // namespace

std::vector<ScheduleLevel> precision_schedule(int m, const Rational& eps) {
    if (m < 1) throw InvalidQueryError("precision_schedule: m must be >= 1");
    std::vector<ScheduleLevel> levels;
    Rational e = eps;
    int cur = m;
    while (cur > 1) {
        levels.push_back(make_level(cur, e));
        e = levels.back().f_call;
        cur = (cur + 1) / 2;
    }
    levels.push_back(make_level(1, e));
    return levels;
}

unsigned schedule_max_bits(const std::vector<ScheduleLevel>& schedule) {
    unsigned bits = 0;
    for (const ScheduleLevel& lv : schedule)
        bits = std::max({bits, lv.bits_ptilde, lv.bits_schur, lv.bits_assemble, lv.bits_base});
    return bits;
}

InverseApprox rec_invert(const RDDLSystem& sys, const Rational& eps) {
    if (eps <= 0) throw InvalidQueryError("rec_invert: eps must be positive");
    return rec_invert_impl(sys, eps);
}

unsigned transition_build_bits(int n, const Rational& eps) {
    Rational quant = eps / (Rational(1048576) * (n + 4) * (n + 4));
    return PrecisionBudget(quant).bits;
}

EscapeResult escape_via_recinvert(const Graph& g, int t, int p, const Rational& eps) {
    if (eps <= 0 || eps >= 1) throw InvalidQueryError("escape_via_recinvert: eps must be in (0,1)");
    Classification cls = classify_vertices(g, t, p);
    unsigned build_bits = transition_build_bits(g.n, eps);
    TransitionMatrix a = build_transition(g, t, p, build_bits, &cls);
    EscapeSystem esys = build_escape_system(a, cls);

    MPVector probs;
    if (esys.m > 0) {
        RDDLSystem sys;
        sys.m = esys.m;
        sys.offdiag_mag = esys.offdiag_mag;
        sys.excess_mag = esys.excess_mag;
        InverseApprox inv = rec_invert(sys, eps / 2);
        unsigned bits = PrecisionBudget(eps / (2 * esys.m + 2)).bits;
        probs = mat_vec(inv.z, esys.col_t, bits);
    }
    return merge_result(cls, esys.vertex, probs, eps, build_bits);
}

} // namespace escprob
