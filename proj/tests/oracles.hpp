// Independent reference computations used only by tests. These deliberately
// avoid the library's expm / solve code paths.
#ifndef SAIKRY_TESTS_ORACLES_HPP
#define SAIKRY_TESTS_ORACLES_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "saikry/dense.hpp"
#include "saikry/sparse.hpp"

namespace oracles {

using saikry::DenseMatrix;
using saikry::SparseMatrix;

inline DenseMatrix omul(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.n_rows, b.n_cols);
    for (int i = 0; i < a.n_rows; ++i)
        for (int j = 0; j < b.n_cols; ++j) {
            double s = 0.0;
            for (int k = 0; k < a.n_cols; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline double onorm(const DenseMatrix& a) {
    double best = 0.0;
    for (int j = 0; j < a.n_cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < a.n_rows; ++i) s += std::fabs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

// Taylor-series matrix exponential with compensated summation, applied after
// scaling the argument below unit norm; undone by repeated squaring.
inline DenseMatrix expm_taylor(const DenseMatrix& m, int terms = 150) {
    const int n = m.n_rows;
    int squarings = 0;
    const double norm = onorm(m);
    if (norm > 1.0) squarings = static_cast<int>(std::ceil(std::log2(norm)));
    DenseMatrix t = m;
    const double scale = std::ldexp(1.0, -squarings);
    for (double& v : t.values) v *= scale;

    DenseMatrix sum = DenseMatrix::identity(n);
    DenseMatrix comp(n, n);  // Kahan compensation
    DenseMatrix term = DenseMatrix::identity(n);
    for (int k = 1; k <= terms; ++k) {
        term = omul(term, t);
        const double inv_k = 1.0 / static_cast<double>(k);
        for (double& v : term.values) v *= inv_k;
        for (size_t i = 0; i < sum.values.size(); ++i) {
            const double y = term.values[i] - comp.values[i];
            const double s = sum.values[i] + y;
            comp.values[i] = (s - sum.values[i]) - y;
            sum.values[i] = s;
        }
        if (onorm(term) < 1e-300) break;
    }
    for (int s = 0; s < squarings; ++s) sum = omul(sum, sum);
    return sum;
}

inline DenseMatrix dense_from_sparse(const SparseMatrix& a) {
    DenseMatrix d(a.n_rows, a.n_cols);
    for (int i = 0; i < a.n_rows; ++i)
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            d(i, a.col_idx[k]) = a.values[k];
    return d;
}

// Plain Gaussian elimination with partial pivoting, x = A^{-1} b.
inline std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b) {
    const int n = a.n_rows;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) throw std::runtime_error("dense_solve: singular");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double l = a(i, k) / a(k, k);
            for (int j = k; j < n; ++j) a(i, j) -= l * a(k, j);
            b[static_cast<size_t>(i)] -= l * b[static_cast<size_t>(k)];
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        double s = b[static_cast<size_t>(k)];
        for (int j = k + 1; j < n; ++j) s -= a(k, j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(k)] = s / a(k, k);
    }
    return b;
}

inline std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
    std::vector<double> y(static_cast<size_t>(a.n_rows), 0.0);
    for (int i = 0; i < a.n_rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < a.n_cols; ++j) s += a(i, j) * x[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] = s;
    }
    return y;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::fabs(a.values[i] - b.values[i]));
    return m;
}

inline DenseMatrix random_matrix(std::mt19937_64& gen, int n, double target_one_norm) {
    DenseMatrix m(n, n);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (double& v : m.values) v = unif(gen);
    const double norm = onorm(m);
    if (norm > 0.0)
        for (double& v : m.values) v *= target_one_norm / norm;
    return m;
}

}  // namespace oracles

#endif  // SAIKRY_TESTS_ORACLES_HPP
