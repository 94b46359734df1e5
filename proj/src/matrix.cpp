#include "escprob/matrix.hpp"
#include "escprob/errors.hpp"

#include <cstdlib>
#include <thread>

namespace escprob {

unsigned worker_count() {
    static const unsigned cached = [] {
        const char* env = std::getenv("ESC_PROB_THREADS");
        if (!env) return 1u;
        long v = std::strtol(env, nullptr, 10);
        if (v <= 1) return 1u;
        unsigned hw = std::thread::hardware_concurrency();
        if (hw == 0) hw = 1;
        return static_cast<unsigned>(std::min<long>(v, hw));
    }();
    return cached;
}

namespace {

template <class Fn>
void for_rows(std::size_t nrows, Fn&& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || nrows < 2 * workers) {
        for (std::size_t i = 0; i < nrows; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (nrows + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(nrows, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace

// Dense cubic products, every entry a fixed left-to-right accumulation.
// Exact-zero terms are still performed (they are exact identities), which
// keeps the op count at the algorithm's stated cubic cost.
MPMatrix mat_mul(const MPMatrix& a, const MPMatrix& b, unsigned p) {
    if (a.cols() != b.rows()) throw Error("mat_mul: shape mismatch");
    MPMatrix c(a.rows(), b.cols(), MPFloat::zero(p));
    for_rows(a.rows(), [&](std::size_t i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            MPFloat acc = MPFloat::zero(p);
            for (std::size_t k = 0; k < a.cols(); ++k)
                acc = mp_add(acc, mp_mul(a(i, k), b(k, j), p), p);
            c(i, j) = std::move(acc);
        }
    });
    return c;
}

MPVector mat_vec(const MPMatrix& a, const MPVector& x, unsigned p) {
    if (a.cols() != x.size()) throw Error("mat_vec: shape mismatch");
    MPVector y(a.rows(), MPFloat::zero(p));
    for_rows(a.rows(), [&](std::size_t i) {
        MPFloat acc = MPFloat::zero(p);
        for (std::size_t k = 0; k < a.cols(); ++k)
            acc = mp_add(acc, mp_mul(a(i, k), x[k], p), p);
        y[i] = std::move(acc);
    });
    return y;
}

void add_to_diagonal(MPMatrix& a, const MPFloat& d, unsigned p) {
    for (std::size_t i = 0; i < a.rows() && i < a.cols(); ++i) a(i, i) = mp_add(a(i, i), d, p);
}

} // namespace escprob
