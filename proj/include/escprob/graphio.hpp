#ifndef ESCPROB_GRAPHIO_HPP
#define ESCPROB_GRAPHIO_HPP

#include "escprob/mpfloat.hpp"
#include "escprob/rational.hpp"

#include <string_view>
#include <vector>

namespace escprob {

// One stored arc. Undirected inputs are stored as two symmetric arcs
// (a single arc for self-loops). Weights carry both the rounded float and
// the exact rational value of the source literal, so the oracle side can
// build exact twins without re-parsing.
struct Arc {
    int from;
    int to;
    MPFloat weight;
    Rational weight_exact;
};

struct Graph {
    int n = 0;
    bool directed = false;
    std::vector<Arc> arcs;
    // arc indices by source vertex, positive-weight arcs only, input order
    std::vector<std::vector<int>> out;
    // number of positive-weight input edges (undirected count for
    // undirected graphs); feeds the m^2 hitting-time bound
    long positive_edges = 0;

    void add_edge(int u, int v, const MPFloat& w, const Rational& w_exact);
    void add_unit_edge(int u, int v, unsigned bits = 32);
};

enum class VertexTag { generic, forced_one, forced_zero, undefined, absorbing_t, absorbing_p };

// Partition of V \ {t, p} by forced escape probability, plus the two
// absorbing vertices themselves.
struct Classification {
    int t = -1, p = -1;
    std::vector<VertexTag> tag;

    bool is_excluded(int v) const { return tag[static_cast<std::size_t>(v)] == VertexTag::undefined; }
    std::vector<int> kept_vertices() const; // non-absorbing, non-undefined, input order
};

// First line "directed <n>" or "undirected <n>", then "u v w" per line,
// '#' starts a comment, blank lines ignored. Weights are nonnegative
// decimal/scientific literals parsed at `bits` significand bits.
Graph parse_graph(std::string_view text, unsigned bits);

// Reads just the header so callers can size the parse precision from n.
struct GraphHeader {
    bool directed;
    int n;
};
GraphHeader peek_graph_header(std::string_view text);

// Three directed searches over positive-weight edges, no arithmetic:
// reach {t,p}, reach p with t removed, reach t with p removed.
Classification classify_vertices(const Graph& g, int t, int p);

// The Fig.-1 family: path v0..v_{n-2} (s = v0, t = v_{n-2}) plus a hub p
// adjacent to every path vertex; unweighted, undirected. Requires n >= 4.
Graph hub_path_graph(int n);

// Convention used by tests and the benchmark sweep.
inline int hub_path_s(int) { return 0; }
inline int hub_path_t(int n) { return n - 2; }
inline int hub_path_p(int n) { return n - 1; }

} // namespace escprob

#endif
