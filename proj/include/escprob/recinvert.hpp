#ifndef ESCPROB_RECINVERT_HPP
#define ESCPROB_RECINVERT_HPP

#include "escprob/escape_result.hpp"
#include "escprob/walkmatrix.hpp"

#include <vector>

namespace escprob {

// Input to the recursive inversion: N is implied by nonpositive
// off-diagonals M (stored as magnitudes, zero diagonal) and the
// nonpositive excess v (stored as magnitudes):
// N_ij = M_ij (i != j), N_ii = -(v_i + sum_{j != i} M_ij).
struct RDDLSystem {
    int m = 0;
    MPMatrix offdiag_mag;
    MPVector excess_mag;
};

// Approximate inverse: entry-wise within e^eps of N^{-1}; all entries
// nonnegative (inverse entries are arborescence-weight ratios).
struct InverseApprox {
    MPMatrix z;
    Rational eps_achieved;
};

// One recursion level of the varying-precision schedule. Budgets follow
// the divisor chain of the recursion with the current dimension m:
// p-tilde at eps/(160 m^8), F call at eps/(80 m^7), Schur assembly at
// eps/(40 m^7), Schur call at eps/(20 m^7), block assembly at eps/(5m).
// bits_* are the per-op significand widths actually used (line budget
// divided by the per-entry op-chain length).
struct ScheduleLevel {
    int m;
    Rational eps;
    Rational ptilde_budget;
    Rational f_call;
    Rational schur_form;
    Rational schur_call;
    Rational assemble;
    unsigned bits_ptilde = 0;
    unsigned bits_schur = 0;
    unsigned bits_assemble = 0;
    unsigned bits_base = 0; // base-case division width (m == 1 level)
};

// The worst-budget chain (always following the F child, which has both the
// larger dimension and the smaller budget). The deepest level's widths
// bound, and are attained by, every operation in the call tree.
std::vector<ScheduleLevel> precision_schedule(int m, const Rational& eps);

unsigned schedule_max_bits(const std::vector<ScheduleLevel>& schedule);

// Fig.-2-style recursive Schur-complement inversion with excess vector.
// Entirely nonnegative arithmetic: products carrying two structural
// negations cancel, every "subtraction" is a same-sign accumulation of
// magnitudes. Throws SingularError when a 1x1 base excess is exactly zero
// (the system's graph is not connected to the dummy vertex).
InverseApprox rec_invert(const RDDLSystem& sys, const Rational& eps);

// Thm-1.1-style driver: classify, build the kept-vertex system, invert at
// eps/2, multiply by the t column at per-op budget eps/(2m+2), merge tags.
EscapeResult escape_via_recinvert(const Graph& g, int t, int p, const Rational& eps);

// Transition-build width used by the escape drivers: comfortably below the
// solver budgets so input quantization never shows up in the error budget.
unsigned transition_build_bits(int n, const Rational& eps);

} // namespace escprob

#endif
