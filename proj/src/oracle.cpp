#include "escprob/oracle.hpp"
#include "escprob/errors.hpp"
#include "escprob/walkmatrix.hpp"

#include <algorithm>
#include <cmath>

namespace escprob {

namespace {

BigInt lcm_int(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    return a / boost::multiprecision::gcd(a, b) * b;
}

BigInt exact_quotient(const BigInt& num, const BigInt& den) {
    BigInt q, r;
    boost::multiprecision::divide_qr(num, den, q, r);
    if (r != 0) throw Error("fraction-free elimination: non-exact division (internal bug)");
    return q;
}

// Row-scales a rational matrix to integers: I(i,j) = m(i,j) * scale_i.
struct ScaledInt {
    std::vector<std::vector<BigInt>> a;
    std::vector<BigInt> scale;
};

ScaledInt to_scaled_int(const RationalMatrix& m) {
    std::size_t n = m.rows();
    ScaledInt s;
    s.a.assign(n, std::vector<BigInt>(m.cols()));
    s.scale.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        BigInt l = 1;
        for (std::size_t j = 0; j < m.cols(); ++j) l = lcm_int(l, denominator(m(i, j)));
        s.scale[i] = l;
        for (std::size_t j = 0; j < m.cols(); ++j)
            s.a[i][j] = numerator(m(i, j)) * (l / denominator(m(i, j)));
    }
    return s;
}

} // namespace

Rational det_rational(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw Error("det_rational: not square");
    std::size_t n = m.rows();
    if (n == 0) return Rational(1);
    ScaledInt s = to_scaled_int(m);
    auto& a = s.a;
    int sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k] == 0) ++piv;
            if (piv == n) return Rational(0);
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = exact_quotient(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev);
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Rational det(a[n - 1][n - 1]);
    if (sign < 0) det = -det;
    for (std::size_t i = 0; i < n; ++i) det /= Rational(s.scale[i]);
    return det;
}

RationalMatrix exact_inverse(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw Error("exact_inverse: not square");
    std::size_t n = m.rows();
    if (n == 0) return m;
    ScaledInt s = to_scaled_int(m);

    // Fraction-free Gauss-Jordan on [A | I]; at completion the left block
    // is det(A) * Id and the right block det(A) * A^{-1}.
    std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(2 * n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = s.a[i][j];
        a[i][n + i] = 1;
    }
    int sign = 1;
    BigInt prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k] == 0) ++piv;
            if (piv == n) throw SingularError("exact_inverse: singular matrix");
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            for (std::size_t j = 0; j < 2 * n; ++j) {
                if (j == k) continue;
                a[i][j] = exact_quotient(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev);
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    BigInt det_int = a[n - 1][n - 1];
    if (det_int == 0) throw SingularError("exact_inverse: singular matrix");
    if (sign < 0) det_int = -det_int;

    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            BigInt num = sign < 0 ? BigInt(-a[i][n + j]) : a[i][n + j];
            inv(i, j) = Rational(num * s.scale[j]) / Rational(det_int);
        }
    return inv;
}

RationalVector exact_solve(const RationalMatrix& m, const RationalVector& b) {
    RationalMatrix inv = exact_inverse(m);
    RationalVector x(m.rows(), Rational(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Rational acc = 0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (inv(i, j) != 0 && b[j] != 0) acc += inv(i, j) * b[j];
        x[i] = acc;
    }
    return x;
}

RationalMatrix rational_transition(const Graph& g, int t, int p, const Classification* cls) {
    auto n = static_cast<std::size_t>(g.n);
    RationalMatrix a(n, n, Rational(0));
    for (int i = 0; i < g.n; ++i) {
        auto ii = static_cast<std::size_t>(i);
        if (i == t || i == p || (cls && cls->is_excluded(i))) continue;
        Rational deg = 0;
        for (int ai : g.out[ii]) deg += g.arcs[static_cast<std::size_t>(ai)].weight_exact;
        if (deg == 0) continue;
        for (int ai : g.out[ii]) {
            const Arc& arc = g.arcs[static_cast<std::size_t>(ai)];
            a(ii, static_cast<std::size_t>(arc.to)) += arc.weight_exact / deg;
        }
    }
    return a;
}

std::vector<std::optional<Rational>> exact_escape(const Graph& g, int t, int p) {
    Classification cls = classify_vertices(g, t, p);
    RationalMatrix a = rational_transition(g, t, p, &cls);
    std::vector<int> kept = cls.kept_vertices();
    auto m = kept.size();

    RationalMatrix sys(m, m, Rational(0));
    RationalVector rhs(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        auto gi = static_cast<std::size_t>(kept[i]);
        for (std::size_t j = 0; j < m; ++j) {
            auto gj = static_cast<std::size_t>(kept[j]);
            sys(i, j) = i == j ? Rational(1) - a(gi, gj) : -a(gi, gj);
        }
        rhs[i] = a(gi, static_cast<std::size_t>(t));
    }
    RationalVector x = m > 0 ? exact_solve(sys, rhs) : RationalVector{};

    std::vector<std::optional<Rational>> out(static_cast<std::size_t>(g.n));
    for (std::size_t i = 0; i < m; ++i) out[static_cast<std::size_t>(kept[i])] = x[i];
    out[static_cast<std::size_t>(t)] = Rational(1);
    out[static_cast<std::size_t>(p)] = Rational(0);
    return out;
}

void RatDigraph::add_edge(int u, int v, const Rational& w) {
    if (w <= 0) throw Error("RatDigraph: weights must be positive");
    out[static_cast<std::size_t>(u)].emplace_back(v, w);
}

Rational spanning_tree_sum(const RatDigraph& g, int root) {
    int n = g.n;
    std::vector<int> vertices;
    for (int v = 0; v < n; ++v)
        if (v != root) vertices.push_back(v);

    // choice[k] = index into out[vertices[k]]; a full assignment is an
    // arborescence iff following the picks from every vertex reaches root.
    Rational total = 0;
    std::vector<std::size_t> choice(vertices.size(), 0);
    std::vector<int> next(static_cast<std::size_t>(n), -1);

    auto leaf_check = [&]() -> bool {
        for (int s : vertices) {
            int v = s;
            int steps = 0;
            while (v != root) {
                v = next[static_cast<std::size_t>(v)];
                if (v < 0 || ++steps > n) return false;
            }
        }
        return true;
    };

    std::size_t k = 0;
    if (vertices.empty()) return Rational(1); // empty product, single trivial tree
    while (true) {
        if (choice[k] >= g.out[static_cast<std::size_t>(vertices[k])].size()) {
            if (k == 0) break;
            choice[k] = 0;
            next[static_cast<std::size_t>(vertices[k])] = -1;
            --k;
            ++choice[k];
            continue;
        }
        next[static_cast<std::size_t>(vertices[k])] =
            g.out[static_cast<std::size_t>(vertices[k])][choice[k]].first;
        if (k + 1 < vertices.size()) {
            ++k;
            continue;
        }
        if (leaf_check()) {
            Rational prod = 1;
            for (std::size_t i = 0; i < vertices.size(); ++i)
                prod *= g.out[static_cast<std::size_t>(vertices[i])][choice[i]].second;
            total += prod;
        }
        ++choice[k];
    }
    return total;
}

RatDigraph dummy_lift(const RationalMatrix& m) {
    std::size_t n = m.rows();
    RatDigraph g;
    g.n = static_cast<int>(n) + 1;
    g.out.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        Rational row_sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            row_sum += m(i, j);
            if (i != j && m(i, j) < 0) g.add_edge(static_cast<int>(i), static_cast<int>(j), -m(i, j));
        }
        if (row_sum > 0) g.add_edge(static_cast<int>(i), static_cast<int>(n), row_sum);
    }
    return g;
}

RationalMatrix inverse_entry_surgery(const RationalMatrix& m, int i, int j) {
    std::size_t n = m.rows();
    if (n < 1 || m.cols() != n) throw Error("inverse_entry_surgery: bad shape");
    if (i < 0 || j < 0 || i >= static_cast<int>(n) || j >= static_cast<int>(n))
        throw Error("inverse_entry_surgery: index out of range");

    if (i == j) {
        // principal minor: drop row i and column i
        RationalMatrix r(n - 1, n - 1);
        for (std::size_t a = 0, ra = 0; a < n; ++a) {
            if (a == static_cast<std::size_t>(i)) continue;
            for (std::size_t b = 0, rb = 0; b < n; ++b) {
                if (b == static_cast<std::size_t>(i)) continue;
                r(ra, rb) = m(a, b);
                ++rb;
            }
            ++ra;
        }
        return r;
    }

    // Drop row j and column i; rows track the column indices except at the
    // position of column j, which takes row i. The resulting reordered
    // minor has det(M^{(i,j)}) = -det; summing all columns into the special
    // column and negating it flips the sign back and restores RDDL.
    std::vector<std::size_t> cols;
    for (std::size_t b = 0; b < n; ++b)
        if (b != static_cast<std::size_t>(i)) cols.push_back(b);
    std::vector<std::size_t> rows = cols;
    std::size_t special = 0;
    for (std::size_t k = 0; k < cols.size(); ++k)
        if (cols[k] == static_cast<std::size_t>(j)) {
            rows[k] = static_cast<std::size_t>(i);
            special = k;
        }

    RationalMatrix r(n - 1, n - 1);
    for (std::size_t a = 0; a < n - 1; ++a)
        for (std::size_t b = 0; b < n - 1; ++b) r(a, b) = m(rows[a], cols[b]);
    for (std::size_t a = 0; a < n - 1; ++a) {
        Rational row_sum = 0;
        for (std::size_t b = 0; b < n - 1; ++b) row_sum += r(a, b);
        r(a, special) = -row_sum;
    }
    return r;
}

std::pair<Rational, Rational> inverse_entry_as_tree_ratio(const RationalMatrix& m, int i, int j) {
    RationalMatrix surg = inverse_entry_surgery(m, i, j);
    Rational num = spanning_tree_sum(dummy_lift(surg), static_cast<int>(surg.rows()));
    Rational den = spanning_tree_sum(dummy_lift(m), static_cast<int>(m.rows()));
    if (den == 0) throw SingularError("inverse_entry_as_tree_ratio: singular matrix");
    Rational check = exact_inverse(m)(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    if (num / den != check)
        throw Error("inverse_entry_as_tree_ratio: tree ratio disagrees with exact inverse (internal bug)");
    return {num, den};
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

constexpr std::uint64_t kWalkCap = 1'000'000;

// Exact inverse-CDF tables: per vertex, integer thresholds over a common
// per-vertex denominator. A draw r picks the first k with
// r * total < cum[k+1] * 2^64, i.e. floor(total * r / 2^64) < cum[k+1].
struct SamplerRow {
    std::vector<int> targets;
    std::vector<BigInt> cum; // cum[0] = 0, cum.back() = total
    BigInt total;
};

SamplerRow build_row(const Graph& g, int v) {
    SamplerRow row;
    BigInt l = 1;
    for (int ai : g.out[static_cast<std::size_t>(v)])
        l = lcm_int(l, denominator(g.arcs[static_cast<std::size_t>(ai)].weight_exact));
    BigInt acc = 0;
    row.cum.push_back(acc);
    for (int ai : g.out[static_cast<std::size_t>(v)]) {
        const Arc& arc = g.arcs[static_cast<std::size_t>(ai)];
        acc += numerator(arc.weight_exact) * (l / denominator(arc.weight_exact));
        row.targets.push_back(arc.to);
        row.cum.push_back(acc);
    }
    row.total = acc;
    return row;
}

int sample_next(const SamplerRow& row, std::uint64_t r) {
    // x = floor(total * r / 2^64), uniform over [0, total) up to 2^-64 bias
    BigInt x = (row.total * r) >> 64;
    std::size_t lo = 0, hi = row.targets.size();
    while (lo + 1 < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (x < row.cum[mid])
            hi = mid;
        else
            lo = mid;
    }
    return row.targets[lo];
}

} // namespace

SimulationResult simulate_escape(const Graph& g, int t, int p, std::uint64_t trials, std::uint64_t seed) {
    if (t == p) throw InvalidQueryError("simulate_escape: t == p");
    if (trials < 1) throw InvalidQueryError("simulate_escape: trials must be >= 1");
    std::vector<SamplerRow> rows(static_cast<std::size_t>(g.n));
    for (int v = 0; v < g.n; ++v)
        if (v != t && v != p) rows[static_cast<std::size_t>(v)] = build_row(g, v);

    SimulationResult res;
    res.trials = trials;
    res.seed = seed;
    res.per_vertex.resize(static_cast<std::size_t>(g.n));
    for (int s = 0; s < g.n; ++s) {
        SimulatedVertex& sv = res.per_vertex[static_cast<std::size_t>(s)];
        sv.vertex = s;
        for (std::uint64_t trial = 0; trial < trials; ++trial) {
            // one independent stream per (vertex, trial)
            std::uint64_t state = seed;
            std::uint64_t tweak = static_cast<std::uint64_t>(s) * 0x9E3779B97F4A7C15ULL + trial;
            state ^= splitmix64(tweak);
            int v = s;
            std::uint64_t steps = 0;
            while (v != t && v != p) {
                const SamplerRow& row = rows[static_cast<std::size_t>(v)];
                if (row.targets.empty()) break; // dead end, counts as capped
                v = sample_next(row, splitmix64(state));
                if (++steps >= kWalkCap) break;
            }
            if (v == t)
                ++sv.hits_t;
            else if (v == p)
                ++sv.hits_p;
            else
                ++sv.capped;
        }
        sv.estimate = Rational(sv.hits_t, trials);
        double q = static_cast<double>(sv.hits_t) / static_cast<double>(trials);
        sv.std_error = std::sqrt(std::max(q * (1.0 - q), 0.0) / static_cast<double>(trials));
    }
    return res;
}

} // namespace escprob
