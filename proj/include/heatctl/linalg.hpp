#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "heatctl/real.hpp"

namespace heatctl {

template <class R>
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<R> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    R& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const R& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

class SingularMatrixError : public std::runtime_error {
  public:
    SingularMatrixError(const std::string& what, double cond) : std::runtime_error(what), cond_(cond) {}
    double condition_estimate() const { return cond_; }

  private:
    double cond_;
};

namespace detail {

// LU with partial pivoting, in place; returns the pivot permutation.
template <class R>
std::vector<std::size_t> lu_factor(Matrix<R>& m, const R& pivot_floor) {
    using std::fabs;
    const std::size_t n = m.rows;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        R best = fabs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const R v = fabs(m(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (!(best > pivot_floor))
            throw SingularMatrixError("matrix is singular to working precision", 0.0);
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            std::swap(perm[k], perm[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const R f = m(i, k) / m(k, k);
            m(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return perm;
}

template <class R>
std::vector<R> lu_solve(const Matrix<R>& lu, const std::vector<std::size_t>& perm,
                        const std::vector<R>& b) {
    const std::size_t n = lu.rows;
    std::vector<R> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] /= lu(i, i);
    }
    return x;
}

template <class R>
R norm1(const Matrix<R>& m) {
    using std::fabs;
    R best{};
    for (std::size_t j = 0; j < m.cols; ++j) {
        R s{};
        for (std::size_t i = 0; i < m.rows; ++i) s += fabs(m(i, j));
        if (s > best) best = s;
    }
    return best;
}

}  // namespace detail

template <class R>
struct SolveResult {
    std::vector<R> x;
    R condition_estimate{};  // ||A||_1 ||A^-1||_1
};

// Direct elimination with partial pivoting at working precision. The systems
// here are small (N <= ~16) and dense; conditioning is handled by precision.
template <class R>
SolveResult<R> solve_dense(const Matrix<R>& a, const std::vector<R>& b, unsigned digits) {
    if (a.rows != a.cols || a.rows != b.size())
        throw std::invalid_argument("solve_dense: square system required");
    const R floor = detail::norm1(a) * pow10<R>(-(static_cast<int>(digits) + 8));
    Matrix<R> lu = a;
    std::vector<std::size_t> perm;
    try {
        perm = detail::lu_factor(lu, floor);
    } catch (const SingularMatrixError&) {
        throw SingularMatrixError("matrix is singular to working precision",
                                  static_cast<double>(detail::norm1(a)));
    }
    SolveResult<R> out;
    out.x = detail::lu_solve(lu, perm, b);

    // explicit inverse for the 1-norm condition estimate; n is tiny
    const std::size_t n = a.rows;
    Matrix<R> inv(n, n);
    std::vector<R> e(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) e[i] = (i == j) ? R(1) : R(0);
        const auto col = detail::lu_solve(lu, perm, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    out.condition_estimate = detail::norm1(a) * detail::norm1(inv);
    return out;
}

template <class R>
R residual_norm2(const Matrix<R>& a, const std::vector<R>& x, const std::vector<R>& b) {
    using std::sqrt;
    R acc{};
    for (std::size_t i = 0; i < a.rows; ++i) {
        R r = -b[i];
        for (std::size_t j = 0; j < a.cols; ++j) r += a(i, j) * x[j];
        acc += r * r;
    }
    return sqrt(acc);
}

}  // namespace heatctl
