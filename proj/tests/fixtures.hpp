#ifndef ESCPROB_TESTS_FIXTURES_HPP
#define ESCPROB_TESTS_FIXTURES_HPP

#include "escprob/graphio.hpp"
#include "escprob/oracle.hpp"
#include "escprob/recinvert.hpp"

#include <cstdint>
#include <vector>

namespace escprob::testing {

struct TestRng {
    std::uint64_t state;

    explicit TestRng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() { return splitmix64(state); }
    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // uniform integer in [lo, hi]
    long range(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool chance(double prob) { return uniform() < prob; }
};

struct RandomSystem {
    RDDLSystem sys;         // dyadic-exact float magnitudes
    RationalMatrix n_exact; // the implied RDDL matrix N, exactly
};

// Random invertible RDDL system with the excess-vector representation.
// wide: magnitudes mantissa * 2^[-60, 60]; otherwise integers in
// [1, max_int]. Dummy-connectivity (hence invertibility) is enforced by
// adding excess to vertices that cannot reach an excess-positive vertex.
inline RandomSystem random_rddl_system(TestRng& rng, int m, bool wide, long max_int = 4) {
    auto mm = static_cast<std::size_t>(m);
    const unsigned bits = 64;
    MPMatrix off(mm, mm, MPFloat::zero(bits));
    MPVector ex(mm, MPFloat::zero(bits));

    auto random_weight = [&]() {
        if (wide) {
            std::int64_t mant = static_cast<std::int64_t>((rng.next() >> 12) | 1);
            long e2 = rng.range(-60, 60);
            return MPFloat::from_scaled(mant, e2, bits);
        }
        return MPFloat::from_unsigned(static_cast<std::uint64_t>(rng.range(1, max_int)), bits);
    };

    for (std::size_t i = 0; i < mm; ++i)
        for (std::size_t j = 0; j < mm; ++j)
            if (i != j && rng.chance(0.45)) off(i, j) = random_weight();
    for (std::size_t i = 0; i < mm; ++i)
        if (rng.chance(0.4)) ex[i] = random_weight();

    // every vertex must reach a positive-excess vertex through positive
    // off-diagonals, else the implied N is singular
    std::vector<char> good(mm, 0);
    for (std::size_t i = 0; i < mm; ++i) good[i] = !ex[i].is_zero();
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < mm; ++i) {
            if (good[i]) continue;
            for (std::size_t j = 0; j < mm; ++j)
                if (j != i && !off(i, j).is_zero() && good[j]) {
                    good[i] = 1;
                    changed = true;
                    break;
                }
        }
    }
    for (std::size_t i = 0; i < mm; ++i)
        if (!good[i]) ex[i] = random_weight();

    RandomSystem out;
    out.sys.m = m;
    out.sys.offdiag_mag = off;
    out.sys.excess_mag = ex;
    out.n_exact = RationalMatrix(mm, mm, Rational(0));
    for (std::size_t i = 0; i < mm; ++i) {
        Rational diag = to_rational(ex[i]);
        for (std::size_t j = 0; j < mm; ++j) {
            if (i == j) continue;
            Rational w = to_rational(off(i, j));
            out.n_exact(i, j) = -w;
            diag += w;
        }
        out.n_exact(i, i) = diag;
    }
    return out;
}

// Spanning tree plus `extra` random additional edges, unweighted.
inline Graph random_connected_graph(TestRng& rng, int n, int extra) {
    Graph g;
    g.n = n;
    g.directed = false;
    g.out.resize(static_cast<std::size_t>(n));
    std::vector<std::pair<int, int>> seen;
    auto has = [&](int a, int b) {
        for (auto& e : seen)
            if ((e.first == a && e.second == b) || (e.first == b && e.second == a)) return true;
        return false;
    };
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng.range(0, v - 1));
        g.add_unit_edge(u, v);
        seen.emplace_back(u, v);
    }
    for (int e = 0; e < extra; ++e) {
        int a = static_cast<int>(rng.range(0, n - 1));
        int b = static_cast<int>(rng.range(0, n - 1));
        if (a == b || has(a, b)) continue;
        g.add_unit_edge(a, b);
        seen.emplace_back(a, b);
    }
    return g;
}

// |ln(a/b)| <= eps, exactly when possible (ratio <= 1+eps is sufficient
// since 1+eps < e^eps), falling back to the double log for the sliver
// between 1+eps and e^eps.
inline bool within_log(const Rational& a, const Rational& b, const Rational& eps) {
    if (a == 0 || b == 0) return a == b;
    if ((a > 0) != (b > 0)) return false;
    Rational hi = a > b ? a / b : b / a;
    if (hi <= 1 + eps) return true;
    return approx_ln(hi) <= static_cast<double>(eps) * (1.0 + 1e-9);
}

inline bool within_log(const MPFloat& a, const Rational& b, const Rational& eps) {
    return within_log(to_rational(a), b, eps);
}

// Exact rational transition power check: true iff every row sum of A^k is
// at most 1/2. Runs with a common integer denominator so only integer
// additions and small multiplications occur.
inline bool power_rowsums_le_half(const Graph& g, int t, int p, std::uint64_t k) {
    Classification cls = classify_vertices(g, t, p);
    auto n = static_cast<std::size_t>(g.n);
    // per-row integer weights and degrees
    std::vector<std::vector<BigInt>> w(n, std::vector<BigInt>(n, 0));
    std::vector<BigInt> deg(n, 0);
    for (int i = 0; i < g.n; ++i) {
        auto ii = static_cast<std::size_t>(i);
        if (i == t || i == p || cls.is_excluded(i)) continue;
        for (int ai : g.out[ii]) {
            const Arc& arc = g.arcs[static_cast<std::size_t>(ai)];
            if (denominator(arc.weight_exact) != 1) throw Error("power_rowsums_le_half: integer weights only");
            w[ii][static_cast<std::size_t>(arc.to)] += numerator(arc.weight_exact);
            deg[ii] += numerator(arc.weight_exact);
        }
    }
    BigInt lambda = 1;
    for (std::size_t i = 0; i < n; ++i)
        if (deg[i] != 0) lambda = lambda / boost::multiprecision::gcd(lambda, deg[i]) * deg[i];

    // v_j = A^j 1 as u / lambda^j
    std::vector<BigInt> u(n, 1);
    BigInt denom = 1;
    for (std::uint64_t step = 0; step < k; ++step) {
        std::vector<BigInt> nu(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (deg[i] == 0) continue;
            BigInt acc = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (w[i][j] != 0) acc += w[i][j] * u[j];
            nu[i] = acc * (lambda / deg[i]);
        }
        u = std::move(nu);
        denom *= lambda;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (2 * u[i] > denom) return false;
    return true;
}

// Exact rational matrix power by binary exponentiation (small n, small k).
inline RationalMatrix rational_power(const RationalMatrix& a, std::uint64_t k) {
    std::size_t n = a.rows();
    auto mul = [n](const RationalMatrix& x, const RationalMatrix& y) {
        RationalMatrix z(n, n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (x(i, l) == 0) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (y(l, j) != 0) z(i, j) += x(i, l) * y(l, j);
            }
        return z;
    };
    RationalMatrix result = RationalMatrix::identity(n, Rational(1), Rational(0));
    RationalMatrix base = a;
    while (k) {
        if (k & 1) result = mul(result, base);
        base = mul(base, base);
        k >>= 1;
    }
    return result;
}

} // namespace escprob::testing

#endif
