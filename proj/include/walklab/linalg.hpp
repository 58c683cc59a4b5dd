#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "walklab/error.hpp"
#include "walklab/kernel.hpp"

namespace walklab {

/// Row-major dense matrix, just big enough for the solver work in this
/// library (a few thousand states at most).
struct Dense {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Dense() = default;
    Dense(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Dense identity(int n) {
        Dense m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline Dense to_dense(const Kernel& k) {
    Dense m(k.dim(), k.dim());
    for (int i = 0; i < k.dim(); ++i)
        for (const auto& [j, p] : k.row(i)) m.at(i, j) = p;
    return m;
}

inline Dense matmul(const Dense& x, const Dense& y) {
    Dense z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int t = 0; t < x.cols; ++t) {
            double v = x.at(i, t);
            if (v == 0.0) continue;
            const double* yrow = &y.a[static_cast<std::size_t>(t) * y.cols];
            double* zrow = &z.a[static_cast<std::size_t>(i) * z.cols];
            for (int j = 0; j < y.cols; ++j) zrow[j] += v * yrow[j];
        }
    return z;
}

/// Solve A X = B in place with partially pivoted Gaussian elimination.
/// B may carry several right-hand sides as columns; X overwrites B.
inline void lu_solve_in_place(Dense& A, Dense& B) {
    int n = A.rows;
    if (A.cols != n || B.rows != n) fail(Errc::InvalidSize, "solver shape mismatch");
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(A.at(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (best < 1e-300)
            fail(Errc::SolveFailure, "singular system (pivot " + std::to_string(col) + ")");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A.at(col, j), A.at(piv, j));
            for (int j = 0; j < B.cols; ++j) std::swap(B.at(col, j), B.at(piv, j));
        }
        double inv = 1.0 / A.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            double f = A.at(r, col) * inv;
            if (f == 0.0) continue;
            A.at(r, col) = 0.0;
            for (int j = col + 1; j < n; ++j) A.at(r, j) -= f * A.at(col, j);
            for (int j = 0; j < B.cols; ++j) B.at(r, j) -= f * B.at(col, j);
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        double inv = 1.0 / A.at(col, col);
        for (int j = 0; j < B.cols; ++j) {
            double s = B.at(col, j);
            for (int t = col + 1; t < n; ++t) s -= A.at(col, t) * B.at(t, j);
            B.at(col, j) = s * inv;
        }
    }
}

}  // namespace walklab
