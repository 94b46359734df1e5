#ifndef ESCPROB_MATRIX_HPP
#define ESCPROB_MATRIX_HPP

#include "escprob/mpfloat.hpp"

#include <cstddef>
#include <vector>

namespace escprob {

// Dense row-major matrix over any scalar (MPFloat in solver paths,
// Rational on the oracle side).
template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, const T& init = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, init) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    static Matrix identity(std::size_t n, const T& one, const T& zero = T{}) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using MPMatrix = Matrix<MPFloat>;
using MPVector = std::vector<MPFloat>;

// Worker cap for row-parallel products, from ESC_PROB_THREADS (default 1).
// Results are bit-identical for any worker count: each output entry is a
// fixed left-to-right accumulation over the inner index.
unsigned worker_count();

// C = A * B, every add/mul rounded to p bits. Exact-zero terms are skipped
// (adding an exact zero is the identity, so the result is unchanged).
MPMatrix mat_mul(const MPMatrix& a, const MPMatrix& b, unsigned p);

// y = A * x at p bits.
MPVector mat_vec(const MPMatrix& a, const MPVector& x, unsigned p);

// Adds `d` to every diagonal entry (same-sign additions for nonnegative d).
void add_to_diagonal(MPMatrix& a, const MPFloat& d, unsigned p);

} // namespace escprob

#endif
