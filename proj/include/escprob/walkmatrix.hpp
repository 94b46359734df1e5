#ifndef ESCPROB_WALKMATRIX_HPP
#define ESCPROB_WALKMATRIX_HPP

#include "escprob/graphio.hpp"
#include "escprob/matrix.hpp"

namespace escprob {

// Random-walk matrix with the rows of t and p (and of excluded vertices)
// zeroed. Entries are exact zeros exactly at non-edges and zeroed rows.
struct TransitionMatrix {
    int n = 0;
    int t = -1, p = -1;
    MPMatrix entries;
    std::vector<char> zeroed; // absorbing or excluded rows
};

// The row-diagonally-dominant system solved by both methods:
// N = (I - A) on the kept vertices, held as nonpositive off-diagonals and
// a nonpositive excess vector, both stored as magnitudes. The diagonal is
// never materialized; it is implied by N_ii = -(v_i + sum_{j!=i} M_ij).
// Block-level sign convention: `offdiag_mag` is the magnitude of M's
// off-diagonal (M_ij = -offdiag_mag_ij <= 0), `excess_mag` the magnitude
// of v (v_i = -excess_mag_i <= 0). col_t and col_p are the nonnegative
// absorbing columns of A restricted to kept rows.
struct EscapeSystem {
    int m = 0;
    MPMatrix offdiag_mag;    // m x m, zero diagonal
    MPVector excess_mag;     // |v|, >= 0
    MPVector col_t;          // A_{kept, t}
    MPVector col_p;          // A_{kept, p}
    std::vector<int> vertex; // row index -> graph vertex id (input order)
};

// Builds A: row i (kept) has A_ij = w(i,j) / sum_k w(i,k); the denominator
// is one chain of same-sign additions in arc order, each entry then costs
// one division. Rows of t, p and excluded vertices are exact zeros.
// A kept vertex with no positive out-arc raises ZeroOutDegreeError.
TransitionMatrix build_transition(const Graph& g, int t, int p, unsigned bits,
                                  const Classification* cls = nullptr);

// Extracts the kept-vertex system from A. Off-diagonals are structural
// negations (copies), the excess per row is the same-sign sum of the
// dropped columns (t, p, and any excluded vertex), so the implied diagonal
// equals (I - A)_ii exactly.
EscapeSystem build_escape_system(const TransitionMatrix& a, const Classification& cls);

// Implied diagonal N_ii at the system's stored magnitudes (same-sign adds).
MPFloat reconstruct_diagonal(const EscapeSystem& sys, int i, unsigned bits);

} // namespace escprob

#endif
