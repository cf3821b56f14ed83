#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ppinv/poly.hpp"

namespace ppinv {

// L(x) = sum a_i x^(q^i), an F_q-linear map on F_{q^n}; coeffs has length n.
struct LinearizedPoly {
    const FieldCtx* ctx = nullptr;
    std::vector<FieldElement> coeffs;
};

inline LinearizedPoly linearized(const FieldCtx& ctx, std::vector<FieldElement> coeffs) {
    if (coeffs.size() > ctx.n()) {
        throw std::invalid_argument("LinearizedPoly: more than n coefficients");
    }
    coeffs.resize(ctx.n(), ctx.zero());
    return LinearizedPoly{&ctx, std::move(coeffs)};
}

inline FieldElement eval(const LinearizedPoly& L, const FieldElement& x) {
    const FieldCtx& ctx = *L.ctx;
    FieldElement acc = ctx.zero();
    FieldElement xq = x;
    for (std::uint32_t i = 0; i < ctx.n(); ++i) {
        acc = ctx.add(acc, ctx.mul(L.coeffs[i], xq));
        if (i + 1 < ctx.n()) xq = ctx.frobenius_q(xq, 1);
    }
    return acc;
}

inline SparsePoly to_sparse(const LinearizedPoly& L) {
    const FieldCtx& ctx = *L.ctx;
    SparsePoly r(ctx);
    std::uint64_t qe = 1;
    for (std::uint32_t i = 0; i < ctx.n(); ++i) {
        r.add_term(Bigint(qe), L.coeffs[i]);
        qe *= ctx.q();
    }
    return r;
}

inline EvalMap as_map(const LinearizedPoly& L) {
    return [L](const FieldElement& x) { return eval(L, x); };
}

// number of x with L(x) = 0 is q^dim; recovers dim by enumeration
inline std::size_t kernel_dimension(const LinearizedPoly& L) {
    const FieldCtx& ctx = *L.ctx;
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < ctx.size(); ++i) {
        if (ctx.is_zero(eval(L, ctx.element(i)))) ++count;
    }
    std::size_t dim = 0;
    while (count > 1) {
        count /= ctx.q();
        ++dim;
    }
    return dim;
}

class Matrix {
public:
    Matrix(const FieldCtx& ctx, std::size_t rows, std::size_t cols)
        : ctx_(&ctx), rows_(rows), cols_(cols), a_(rows * cols, ctx.zero()) {}

    const FieldCtx& ctx() const { return *ctx_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    FieldElement& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const FieldElement& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    const FieldCtx* ctx_;
    std::size_t rows_, cols_;
    std::vector<FieldElement> a_;
};

using DicksonMatrix = Matrix;

// row i, column j = a_((j-i) mod n) ^ (q^i)
inline DicksonMatrix dickson(const LinearizedPoly& L) {
    const FieldCtx& ctx = *L.ctx;
    const std::size_t n = ctx.n();
    Matrix m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m.at(i, j) = ctx.frobenius_q(L.coeffs[(j + n - i) % n], i);
        }
    }
    return m;
}

inline Matrix transpose(const Matrix& m) {
    Matrix r(m.ctx(), m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) r.at(j, i) = m.at(i, j);
    }
    return r;
}

struct DetRank {
    FieldElement det;
    std::size_t rank = 0;
};

// Exact Gaussian elimination with first-nonzero pivoting; determinant is the
// signed pivot product when full rank, zero otherwise.
inline DetRank det_rank(const Matrix& m) {
    const FieldCtx& ctx = m.ctx();
    Matrix w = m;
    const std::size_t rows = w.rows(), cols = w.cols();
    std::size_t rank = 0;
    bool swap_sign = false;
    FieldElement prod = ctx.one();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && ctx.is_zero(w.at(pivot, col))) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(w.at(pivot, j), w.at(rank, j));
            swap_sign = !swap_sign;
        }
        prod = ctx.mul(prod, w.at(rank, col));
        FieldElement inv_p = ctx.inv(w.at(rank, col));
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (ctx.is_zero(w.at(r, col))) continue;
            FieldElement f = ctx.mul(w.at(r, col), inv_p);
            for (std::size_t j = col; j < cols; ++j) {
                w.at(r, j) = ctx.sub(w.at(r, j), ctx.mul(f, w.at(rank, j)));
            }
        }
        ++rank;
    }
    DetRank out;
    out.rank = rank;
    if (rows == cols && rank == rows) {
        out.det = swap_sign ? ctx.neg(prod) : prod;
    } else {
        out.det = ctx.zero();
    }
    return out;
}

inline FieldElement det(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix not square");
    return det_rank(m).det;
}

// signed minor deleting row i, column 0; sign (-1)^i with 0-based indices
inline FieldElement cofactor_col0(const Matrix& m, std::size_t i) {
    const FieldCtx& ctx = m.ctx();
    const std::size_t n = m.rows();
    if (n == 1) return ctx.one();
    Matrix minor(ctx, n - 1, n - 1);
    for (std::size_t r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 1; c < n; ++c) minor.at(mr, c - 1) = m.at(r, c);
        ++mr;
    }
    FieldElement d = det(minor);
    return (i % 2) ? ctx.neg(d) : d;
}

// reduced row-echelon form in place; returns pivot column per pivot row
inline std::vector<std::size_t> rref(Matrix& w) {
    const FieldCtx& ctx = w.ctx();
    const std::size_t rows = w.rows(), cols = w.cols();
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && ctx.is_zero(w.at(pivot, col))) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(w.at(pivot, j), w.at(rank, j));
        }
        FieldElement inv_p = ctx.inv(w.at(rank, col));
        for (std::size_t j = col; j < cols; ++j) w.at(rank, j) = ctx.mul(w.at(rank, j), inv_p);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || ctx.is_zero(w.at(r, col))) continue;
            FieldElement f = w.at(r, col);
            for (std::size_t j = col; j < cols; ++j) {
                w.at(r, j) = ctx.sub(w.at(r, j), ctx.mul(f, w.at(rank, j)));
            }
        }
        pivots.push_back(col);
        ++rank;
    }
    return pivots;
}

// Canonical kernel vector of a square matrix of rank n-1: RREF, free variable
// set to 1, then scaled so the first nonzero coordinate is 1.
inline std::vector<FieldElement> nullspace_vec(const Matrix& m) {
    const FieldCtx& ctx = m.ctx();
    if (m.rows() != m.cols()) throw std::invalid_argument("nullspace_vec: matrix not square");
    const std::size_t n = m.rows();
    Matrix w = m;
    std::vector<std::size_t> pivots = rref(w);
    if (pivots.size() != n - 1) {
        throw std::invalid_argument("nullspace_vec: rank is not n-1");
    }
    std::vector<std::uint8_t> is_pivot(n, 0);
    for (std::size_t c : pivots) is_pivot[c] = 1;
    std::size_t free_col = 0;
    while (is_pivot[free_col]) ++free_col;
    std::vector<FieldElement> v(n, ctx.zero());
    v[free_col] = ctx.one();
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        v[pivots[r]] = ctx.neg(w.at(r, free_col));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!ctx.is_zero(v[i])) {
            FieldElement scale = ctx.inv(v[i]);
            for (std::size_t j = 0; j < n; ++j) v[j] = ctx.mul(v[j], scale);
            break;
        }
    }
    return v;
}

inline std::vector<FieldElement> solve_unique(const Matrix& m,
                                              const std::vector<FieldElement>& rhs) {
    const FieldCtx& ctx = m.ctx();
    if (m.rows() != m.cols() || rhs.size() != m.rows()) {
        throw std::invalid_argument("solve_unique: shape mismatch");
    }
    const std::size_t n = m.rows();
    Matrix aug(ctx, n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n) = rhs[i];
    }
    std::vector<std::size_t> pivots = rref(aug);
    if (pivots.size() != n || pivots.back() == n) {
        throw std::domain_error("solve_unique: matrix is singular");
    }
    std::vector<FieldElement> x(n, ctx.zero());
    for (std::size_t r = 0; r < n; ++r) x[pivots[r]] = aug.at(r, n);
    return x;
}

// Compositional inverse of a linearized permutation via the Dickson-matrix
// cofactor formula: L^{-1} = det(D)^{-1} sum cof_(i,0)(D) x^(q^i).
inline LinearizedPoly linearized_inverse(const LinearizedPoly& L) {
    const FieldCtx& ctx = *L.ctx;
    DicksonMatrix D = dickson(L);
    FieldElement d = det(D);
    if (ctx.is_zero(d)) {
        throw std::domain_error("linearized_inverse: singular Dickson matrix, not a permutation");
    }
    FieldElement dinv = ctx.inv(d);
    std::vector<FieldElement> coeffs(ctx.n());
    for (std::uint32_t i = 0; i < ctx.n(); ++i) {
        coeffs[i] = ctx.mul(dinv, cofactor_col0(D, i));
    }
    return linearized(ctx, std::move(coeffs));
}

}  // namespace ppinv
