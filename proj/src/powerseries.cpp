#include "escprob/powerseries.hpp"
#include "escprob/errors.hpp"

namespace escprob {

std::uint64_t hitting_bound(const Graph& g, long c) {
    if (g.directed)
        throw UnsupportedForBoundError(
            "hitting_bound: the m^2 bound holds for undirected graphs; pass an explicit h override");
    if (c < 0) throw InvalidQueryError("hitting_bound: c must be >= 0");
    BigInt m(g.positive_edges);
    BigInt h = pow_int(BigInt(g.n), static_cast<unsigned long>(c)) * m * m + 1;
    if (h > BigInt(std::uint64_t(1) << 62)) throw Error("hitting_bound: bound does not fit in 62 bits");
    return static_cast<std::uint64_t>(h);
}

SeriesPlan truncation_length(std::uint64_t h, int n, long c, const Rational& eps) {
    if (h < 1) throw InvalidQueryError("truncation_length: h must be >= 1");
    if (eps <= 0 || eps >= 1) throw InvalidQueryError("truncation_length: eps must be in (0,1)");
    SeriesPlan plan;
    plan.h = h;
    plan.c = c;
    BigInt two_h1 = BigInt(2) * h + 1;
    Rational log_arg = Rational(two_h1 * n) / eps;
    long lg = ceil_log2(log_arg);
    if (lg < 1) lg = 1;
    BigInt raw = two_h1 * (BigInt(2) * n * (c + 1) * lg + 1);
    unsigned r = 1;
    while ((BigInt(1) << r) <= raw) ++r;
    if (r > 62) throw Error("truncation_length: k does not fit in 62 bits");
    plan.r = r;
    plan.k = std::uint64_t(1) << r;
    Rational denom = (Rational(2) * n * r + 1) * r;
    plan.per_op_eps = eps / denom;
    plan.bits = PrecisionBudget(plan.per_op_eps).bits;
    return plan;
}

MPMatrix power_series_inverse(const TransitionMatrix& a, const SeriesPlan& plan) {
    const unsigned p = plan.bits;
    auto n = static_cast<std::size_t>(a.n);
    const MPFloat one = MPFloat::one(p);

    // X <- I + A; B <- A; then r-1 rounds of B <- B^2, X <- X (I + B).
    MPMatrix b(n, n, MPFloat::zero(p));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!a.entries(i, j).is_zero()) b(i, j) = mp_round(a.entries(i, j), p);
    MPMatrix x = b;
    add_to_diagonal(x, one, p);
    for (unsigned j = 1; j < plan.r; ++j) {
        b = mat_mul(b, b, p);
        MPMatrix factor = b;
        add_to_diagonal(factor, one, p);
        x = mat_mul(x, factor, p);
    }
    return x;
}

long infer_weight_exponent(const Graph& g) {
    Rational min_w = 0, max_w = 0;
    bool any = false;
    for (const Arc& arc : g.arcs) {
        if (!(arc.weight_exact > 0)) continue;
        if (!any || arc.weight_exact < min_w) min_w = arc.weight_exact;
        if (!any || arc.weight_exact > max_w) max_w = arc.weight_exact;
        any = true;
    }
    if (!any) return 0;
    Rational ratio = max_w / min_w;
    long c = 0;
    Rational bound = 1;
    while (bound < ratio) {
        bound *= g.n;
        ++c;
        if (c > 64) throw Error("infer_weight_exponent: weight ratio exceeds n^64");
    }
    return c;
}

bool weights_integer_in_range(const Graph& g, long c) {
    Rational cap(pow_int(BigInt(g.n), static_cast<unsigned long>(c < 0 ? 0 : c)));
    for (const Arc& arc : g.arcs) {
        if (!(arc.weight_exact > 0)) continue;
        if (denominator(arc.weight_exact) != 1) return false;
        if (arc.weight_exact < 1 || arc.weight_exact > cap) return false;
    }
    return true;
}

EscapeResult escape_via_powerseries(const Graph& g, int t, int p, const Rational& eps,
                                    std::optional<std::uint64_t> h_override) {
    if (eps <= 0 || eps >= 1) throw InvalidQueryError("escape_via_powerseries: eps must be in (0,1)");
    Classification cls = classify_vertices(g, t, p);

    long c = infer_weight_exponent(g);
    std::uint64_t h;
    if (h_override) {
        h = *h_override;
        if (h < 1) throw InvalidQueryError("escape_via_powerseries: h override must be >= 1");
    } else {
        if (!weights_integer_in_range(g, c))
            throw UnsupportedForBoundError(
                "escape_via_powerseries: weights are not integers in [1, n^c]; pass an h override");
        h = hitting_bound(g, c);
    }
    SeriesPlan plan = truncation_length(h, g.n, c, eps);

    TransitionMatrix a = build_transition(g, t, p, plan.bits, &cls);
    MPMatrix x = power_series_inverse(a, plan);

    std::vector<int> kept = cls.kept_vertices();
    MPVector probs;
    probs.reserve(kept.size());
    for (int v : kept) probs.push_back(x(static_cast<std::size_t>(v), static_cast<std::size_t>(t)));
    return merge_result(cls, kept, probs, eps, plan.bits);
}

} // namespace escprob
