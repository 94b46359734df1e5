#include "escprob/escape_result.hpp"

namespace escprob {

EscapeResult merge_result(const Classification& cls, const std::vector<int>& vertex,
                          const std::vector<MPFloat>& solved, const Rational& eps, unsigned bits) {
    EscapeResult r;
    r.t = cls.t;
    r.p = cls.p;
    r.eps_achieved = eps;
    int n = static_cast<int>(cls.tag.size());
    r.entries.reserve(static_cast<std::size_t>(n));
    std::vector<const MPFloat*> by_vertex(static_cast<std::size_t>(n), nullptr);
    for (std::size_t k = 0; k < vertex.size(); ++k)
        by_vertex[static_cast<std::size_t>(vertex[k])] = &solved[k];
    for (int v = 0; v < n; ++v) {
        VertexTag tag = cls.tag[static_cast<std::size_t>(v)];
        MPFloat prob = MPFloat::zero(bits);
        switch (tag) {
        case VertexTag::absorbing_t:
        case VertexTag::forced_one:
            prob = MPFloat::one(bits);
            break;
        case VertexTag::absorbing_p:
        case VertexTag::forced_zero:
        case VertexTag::undefined:
            break;
        case VertexTag::generic:
            if (by_vertex[static_cast<std::size_t>(v)]) prob = *by_vertex[static_cast<std::size_t>(v)];
            break;
        }
        r.entries.push_back(EscapeEntry{v, tag, std::move(prob)});
    }
    return r;
}

} // namespace escprob
