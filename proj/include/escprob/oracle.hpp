#ifndef ESCPROB_ORACLE_HPP
#define ESCPROB_ORACLE_HPP

#include "escprob/graphio.hpp"
#include "escprob/matrix.hpp"
#include "escprob/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace escprob {

using RationalMatrix = Matrix<Rational>;
using RationalVector = std::vector<Rational>;

// Exact determinant by fraction-free (Bareiss) elimination on the
// row-scaled integer matrix. Every fraction-free division is checked.
Rational det_rational(const RationalMatrix& m);

// Exact inverse by fraction-free Gauss-Jordan (Montante/Bareiss) on the
// row-scaled integer matrix. Throws SingularError when det = 0.
RationalMatrix exact_inverse(const RationalMatrix& m);

// Exact solve m * x = b via the inverse path.
RationalVector exact_solve(const RationalMatrix& m, const RationalVector& b);

// Exact random-walk transition matrix twin of build_transition: rows of
// t, p and excluded vertices are zero, entries w(i,j)/deg(i).
RationalMatrix rational_transition(const Graph& g, int t, int p, const Classification* cls = nullptr);

// Exact escape probabilities: solves (I-A)_kept x = A_{kept,t}. Entries
// are nullopt for undefined vertices, 1 at t, 0 at p.
std::vector<std::optional<Rational>> exact_escape(const Graph& g, int t, int p);

// Positive-weight digraph for arborescence sums.
struct RatDigraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, Rational>>> out; // (target, weight>0)

    void add_edge(int u, int v, const Rational& w);
};

// Sum over spanning arborescences oriented toward `root` of the product of
// edge weights, by exhaustive enumeration: every non-root vertex picks one
// positive out-edge, cyclic picks contribute nothing. Empty sum = 0.
Rational spanning_tree_sum(const RatDigraph& g, int root);

// Dummy-vertex lift of an RDDL matrix: edge (i,j) with weight -M_ij for
// positive off-diagonal magnitudes, edge (i, n) with weight = row sum when
// positive. det(M) equals the arborescence sum toward the dummy n.
RatDigraph dummy_lift(const RationalMatrix& m);

// Lemma-5.3-style surgery: builds the RDDL matrix whose determinant equals
// det(M with column i replaced by e_j), all three index cases. Exposed for
// tests.
RationalMatrix inverse_entry_surgery(const RationalMatrix& m, int i, int j);

// Returns (det(M^{(i,j)}), det(M)) with the numerator computed as an
// arborescence sum of the surgically built matrix and the denominator as
// an arborescence sum of M's own lift, and asserts that their ratio equals
// exact_inverse(m)(i,j). Intended for small m (enumeration).
std::pair<Rational, Rational> inverse_entry_as_tree_ratio(const RationalMatrix& m, int i, int j);

// splitmix64; the simulator derives one stream per (vertex, trial).
std::uint64_t splitmix64(std::uint64_t& state);

struct SimulatedVertex {
    int vertex;
    std::uint64_t hits_t = 0;
    std::uint64_t hits_p = 0;
    std::uint64_t capped = 0; // walks cut off at the step limit
    Rational estimate;        // hits_t / trials
    double std_error = 0.0;
};

struct SimulationResult {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<SimulatedVertex> per_vertex;
};

// Deterministic Monte-Carlo walks from every vertex; absorption at t or p,
// step cap 10^6. Bit-identical for a given (graph, t, p, trials, seed).
SimulationResult simulate_escape(const Graph& g, int t, int p, std::uint64_t trials, std::uint64_t seed);

} // namespace escprob

#endif
