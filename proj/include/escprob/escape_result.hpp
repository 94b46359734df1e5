#ifndef ESCPROB_ESCAPE_RESULT_HPP
#define ESCPROB_ESCAPE_RESULT_HPP

#include "escprob/graphio.hpp"
#include "escprob/mpfloat.hpp"

#include <vector>

namespace escprob {

// Per-vertex escape probability P(s,t,p). `probability` is meaningless for
// undefined vertices; forced and absorbing vertices carry the exact 0/1.
struct EscapeEntry {
    int vertex;
    VertexTag tag;
    MPFloat probability;
};

struct EscapeResult {
    int t = -1, p = -1;
    std::vector<EscapeEntry> entries; // one per vertex, in vertex order
    Rational eps_achieved;            // multiplicative log-error bound
};

// Fills forced/absorbing/undefined rows; `solved` maps kept-system rows to
// computed probabilities for generic vertices (forced rows in `vertex` are
// overridden by their exact tags).
EscapeResult merge_result(const Classification& cls, const std::vector<int>& vertex,
                          const std::vector<MPFloat>& solved, const Rational& eps, unsigned bits);

} // namespace escprob

#endif
