#pragma once

// Small dense linear algebra in extended precision. The systems solved here are
// at most 10x10 (polynomial degree <= 8) but Vandermonde-like, so the working
// precision is long double.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace codiff::dense {

using Real = long double;

class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0L) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Real operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

private:
    std::size_t rows_, cols_;
    std::vector<Real> data_;
};

// Determinant by Gaussian elimination with partial pivoting.
inline Real determinant(Matrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: square matrix required");
    const std::size_t n = a.rows();
    Real det = 1.0L;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
        }
        if (a(piv, k) == 0.0L) return 0.0L;
        if (piv != k) {
            a.swap_rows(piv, k);
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Real m = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    return det;
}

// Solves a x = b with partial pivoting; throws on an exactly singular pivot.
inline std::vector<Real> solve(Matrix a, std::vector<Real> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve: dimension mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
        }
        if (a(piv, k) == 0.0L) throw std::runtime_error("solve: singular system");
        a.swap_rows(piv, k);
        std::swap(b[piv], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Real m = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= m * a(k, j);
            b[i] -= m * b[k];
        }
    }
    std::vector<Real> x(n);
    for (std::size_t k = n; k-- > 0;) {
        Real s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

}  // namespace codiff::dense
