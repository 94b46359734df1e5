#include "escprob/graphio.hpp"
#include "escprob/errors.hpp"

#include <cctype>
#include <deque>
#include <sstream>

namespace escprob {

void Graph::add_edge(int u, int v, const MPFloat& w, const Rational& w_exact) {
    auto push_arc = [&](int a, int b) {
        if (w_exact > 0) {
            out[static_cast<std::size_t>(a)].push_back(static_cast<int>(arcs.size()));
        }
        arcs.push_back(Arc{a, b, w, w_exact});
    };
    if (w_exact > 0) ++positive_edges;
    push_arc(u, v);
    if (!directed && u != v) push_arc(v, u);
}

void Graph::add_unit_edge(int u, int v, unsigned bits) {
    add_edge(u, v, MPFloat::one(bits), Rational(1));
}

std::vector<int> Classification::kept_vertices() const {
    std::vector<int> kept;
    for (int v = 0; v < static_cast<int>(tag.size()); ++v) {
        VertexTag tv = tag[static_cast<std::size_t>(v)];
        if (tv == VertexTag::generic || tv == VertexTag::forced_one || tv == VertexTag::forced_zero)
            kept.push_back(v);
    }
    return kept;
}

namespace {

struct LineReader {
    std::string_view text;
    std::size_t pos = 0;
    int lineno = 0;

    bool next(std::string& line) {
        while (pos < text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            line.assign(text.substr(pos, end - pos));
            pos = end + (end < text.size() ? 1 : 0);
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::size_t first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            return true;
        }
        return false;
    }
};

[[noreturn]] void parse_fail(int lineno, const std::string& msg) {
    std::ostringstream os;
    os << "graph parse error, line " << lineno << ": " << msg;
    throw ParseError(os.str());
}

GraphHeader parse_header_line(const std::string& line, int lineno) {
    std::istringstream is(line);
    std::string kind;
    long n = -1;
    is >> kind >> n;
    if (kind != "directed" && kind != "undirected") parse_fail(lineno, "expected 'directed <n>' or 'undirected <n>'");
    if (is.fail() || n < 1 || n > 10'000'000) parse_fail(lineno, "bad vertex count");
    std::string rest;
    if (is >> rest) parse_fail(lineno, "trailing tokens after header");
    return GraphHeader{kind == "directed", static_cast<int>(n)};
}

} // namespace

GraphHeader peek_graph_header(std::string_view text) {
    LineReader rd{text};
    std::string line;
    if (!rd.next(line)) throw ParseError("graph parse error: empty input");
    return parse_header_line(line, rd.lineno);
}

Graph parse_graph(std::string_view text, unsigned bits) {
    LineReader rd{text};
    std::string line;
    if (!rd.next(line)) throw ParseError("graph parse error: empty input");
    GraphHeader hdr = parse_header_line(line, rd.lineno);

    Graph g;
    g.n = hdr.n;
    g.directed = hdr.directed;
    g.out.resize(static_cast<std::size_t>(g.n));

    while (rd.next(line)) {
        std::istringstream is(line);
        long u = -1, v = -1;
        std::string wtok;
        is >> u >> v >> wtok;
        if (is.fail() || wtok.empty()) parse_fail(rd.lineno, "expected 'u v w'");
        std::string rest;
        if (is >> rest) parse_fail(rd.lineno, "trailing tokens after edge");
        if (u < 0 || u >= g.n) parse_fail(rd.lineno, "source vertex id out of range");
        if (v < 0 || v >= g.n) parse_fail(rd.lineno, "target vertex id out of range");
        Rational wx;
        try {
            wx = rational_from_decimal(wtok);
        } catch (const ParseError& e) {
            parse_fail(rd.lineno, e.what());
        }
        if (wx < 0) parse_fail(rd.lineno, "negative weight");
        MPFloat w = from_rational(wx, bits);
        g.add_edge(static_cast<int>(u), static_cast<int>(v), w, wx);
    }
    return g;
}

namespace {

// Vertices that can reach `target` along positive-weight arcs, optionally
// with one vertex deleted. Reverse BFS.
std::vector<char> reaches(const Graph& g, const std::vector<int>& targets, int removed) {
    std::vector<std::vector<int>> in(static_cast<std::size_t>(g.n));
    for (const Arc& a : g.arcs) {
        if (!(a.weight_exact > 0)) continue;
        if (a.from == removed || a.to == removed) continue;
        in[static_cast<std::size_t>(a.to)].push_back(a.from);
    }
    std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
    std::deque<int> queue;
    for (int t : targets) {
        if (t == removed || seen[static_cast<std::size_t>(t)]) continue;
        seen[static_cast<std::size_t>(t)] = 1;
        queue.push_back(t);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : in[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                queue.push_back(u);
            }
        }
    }
    return seen;
}

} // namespace

Classification classify_vertices(const Graph& g, int t, int p) {
    if (t == p) throw InvalidQueryError("classify_vertices: t == p");
    if (t < 0 || t >= g.n || p < 0 || p >= g.n) throw InvalidQueryError("classify_vertices: vertex id out of range");

    std::vector<char> reach_tp = reaches(g, {t, p}, -1);
    std::vector<char> reach_p_no_t = reaches(g, {p}, t);
    std::vector<char> reach_t_no_p = reaches(g, {t}, p);

    Classification c;
    c.t = t;
    c.p = p;
    c.tag.assign(static_cast<std::size_t>(g.n), VertexTag::generic);
    for (int v = 0; v < g.n; ++v) {
        auto vi = static_cast<std::size_t>(v);
        if (v == t) {
            c.tag[vi] = VertexTag::absorbing_t;
        } else if (v == p) {
            c.tag[vi] = VertexTag::absorbing_p;
        } else if (!reach_tp[vi]) {
            c.tag[vi] = VertexTag::undefined;
        } else if (!reach_p_no_t[vi]) {
            c.tag[vi] = VertexTag::forced_one;
        } else if (!reach_t_no_p[vi]) {
            c.tag[vi] = VertexTag::forced_zero;
        }
    }
    return c;
}

Graph hub_path_graph(int n) {
    if (n < 4) throw InvalidQueryError("hub_path_graph: need n >= 4");
    Graph g;
    g.n = n;
    g.directed = false;
    g.out.resize(static_cast<std::size_t>(n));
    int hub = n - 1;
    for (int i = 0; i + 1 <= n - 2; ++i) g.add_unit_edge(i, i + 1);
    for (int i = 0; i <= n - 2; ++i) g.add_unit_edge(hub, i);
    return g;
}

} // namespace escprob
