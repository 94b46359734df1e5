#include "escprob/walkmatrix.hpp"
#include "escprob/errors.hpp"

#include <sstream>

namespace escprob {

TransitionMatrix build_transition(const Graph& g, int t, int p, unsigned bits,
                                  const Classification* cls) {
    if (t == p) throw InvalidQueryError("build_transition: t == p");
    TransitionMatrix a;
    a.n = g.n;
    a.t = t;
    a.p = p;
    a.entries = MPMatrix(static_cast<std::size_t>(g.n), static_cast<std::size_t>(g.n), MPFloat::zero(bits));
    a.zeroed.assign(static_cast<std::size_t>(g.n), 0);

    for (int i = 0; i < g.n; ++i) {
        auto ii = static_cast<std::size_t>(i);
        bool excluded = cls && cls->is_excluded(i);
        if (i == t || i == p || excluded) {
            a.zeroed[ii] = 1;
            continue;
        }
        const auto& arcs = g.out[ii];
        if (arcs.empty()) {
            std::ostringstream os;
            os << "build_transition: vertex " << i << " has zero positive out-weight and is not excluded";
            throw ZeroOutDegreeError(os.str());
        }
        // Denominator: one same-sign accumulation chain in arc order.
        MPFloat denom = MPFloat::zero(bits);
        for (int ai : arcs) denom = mp_add(denom, g.arcs[static_cast<std::size_t>(ai)].weight, bits);
        // Numerators per target, then a single division per entry.
        MPVector num(static_cast<std::size_t>(g.n), MPFloat::zero(bits));
        for (int ai : arcs) {
            const Arc& arc = g.arcs[static_cast<std::size_t>(ai)];
            auto vi = static_cast<std::size_t>(arc.to);
            num[vi] = mp_add(num[vi], arc.weight, bits);
        }
        for (int j = 0; j < g.n; ++j) {
            auto jj = static_cast<std::size_t>(j);
            if (!num[jj].is_zero()) a.entries(ii, jj) = mp_div(num[jj], denom, bits);
        }
    }
    return a;
}

EscapeSystem build_escape_system(const TransitionMatrix& a, const Classification& cls) {
    if (cls.t != a.t || cls.p != a.p)
        throw InvalidQueryError("build_escape_system: classification does not match absorbing pair");
    EscapeSystem sys;
    sys.vertex = cls.kept_vertices();
    sys.m = static_cast<int>(sys.vertex.size());
    auto m = static_cast<std::size_t>(sys.m);
    // every entry (zeros included) was built at the transition precision
    unsigned bits = a.n > 0 ? a.entries(0, 0).precision() : 32;

    sys.offdiag_mag = MPMatrix(m, m, MPFloat::zero(bits));
    sys.excess_mag.assign(m, MPFloat::zero(bits));
    sys.col_t.assign(m, MPFloat::zero(bits));
    sys.col_p.assign(m, MPFloat::zero(bits));

    std::vector<char> kept_mask(static_cast<std::size_t>(a.n), 0);
    for (int v : sys.vertex) kept_mask[static_cast<std::size_t>(v)] = 1;

    for (std::size_t i = 0; i < m; ++i) {
        auto gi = static_cast<std::size_t>(sys.vertex[i]);
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue; // self-loops live in the implied diagonal
            sys.offdiag_mag(i, j) = a.entries(gi, static_cast<std::size_t>(sys.vertex[j]));
        }
        sys.col_t[i] = a.entries(gi, static_cast<std::size_t>(a.t));
        sys.col_p[i] = a.entries(gi, static_cast<std::size_t>(a.p));
        // |v_i| = A_{i,t} + A_{i,p} + flow into excluded vertices
        MPFloat ex = mp_add(sys.col_t[i], sys.col_p[i], bits);
        for (int u = 0; u < a.n; ++u) {
            if (u == a.t || u == a.p || kept_mask[static_cast<std::size_t>(u)]) continue;
            const MPFloat& leak = a.entries(gi, static_cast<std::size_t>(u));
            if (!leak.is_zero()) ex = mp_add(ex, leak, bits);
        }
        sys.excess_mag[i] = std::move(ex);
    }
    return sys;
}

MPFloat reconstruct_diagonal(const EscapeSystem& sys, int i, unsigned bits) {
    auto ii = static_cast<std::size_t>(i);
    MPFloat d = mp_round(sys.excess_mag[ii], bits);
    for (std::size_t j = 0; j < static_cast<std::size_t>(sys.m); ++j) {
        if (j == ii || sys.offdiag_mag(ii, j).is_zero()) continue;
        d = mp_add(d, sys.offdiag_mag(ii, j), bits);
    }
    return d;
}

} // namespace escprob
