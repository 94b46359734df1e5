#ifndef ESCPROB_POWERSERIES_HPP
#define ESCPROB_POWERSERIES_HPP

#include "escprob/escape_result.hpp"
#include "escprob/walkmatrix.hpp"

#include <cstdint>
#include <optional>

namespace escprob {

// Truncation plan for sum_{i<k} A^i evaluated as
// (I+A)(I+A^2)(I+A^4)...(I+A^{2^{r-1}}).
struct SeriesPlan {
    std::uint64_t h = 0;     // hitting-time bound, >= 1 + max contracted hitting time
    long c = 0;              // weight-exponent parameter: weights within ratio n^c
    std::uint64_t k = 0;     // truncation length, power of two
    unsigned r = 0;          // log2 k
    Rational per_op_eps;     // eps / ((2nr+1) r)
    unsigned bits = 0;       // significand width for every op
};

// h = n^c * m^2 + 1, valid for undirected graphs whose generic vertices
// reach both t and p (m = positive-weight edge count). Directed inputs
// need an explicit override and are refused here.
std::uint64_t hitting_bound(const Graph& g, long c);

// k = smallest power of two strictly greater than
// (2h+1) * (2n(c+1) ceil(log2((2h+1)n/eps)) + 1); logs base 2 throughout.
SeriesPlan truncation_length(std::uint64_t h, int n, long c, const Rational& eps);

// X ~ sum_{i=0}^{k-1} A^i by repeated squaring, all operations nonnegative
// at plan.bits. Entries that are exactly zero in the true sum stay exact
// zeros (no path of length < k).
MPMatrix power_series_inverse(const TransitionMatrix& a, const SeriesPlan& plan);

// Smallest integer c >= 0 with max_w/min_w <= n^c over positive weights.
long infer_weight_exponent(const Graph& g);

// True iff all positive weights are integers in [1, n^c].
bool weights_integer_in_range(const Graph& g, long c);

// Full driver: classify, bound, truncate, evaluate, take column t.
// h_override enables directed graphs or non-integer weights.
EscapeResult escape_via_powerseries(const Graph& g, int t, int p, const Rational& eps,
                                    std::optional<std::uint64_t> h_override = std::nullopt);

} // namespace escprob

#endif
