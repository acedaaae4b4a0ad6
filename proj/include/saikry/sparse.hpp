#ifndef SAIKRY_SPARSE_HPP
#define SAIKRY_SPARSE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace saikry {

/// Square (or rectangular) real matrix in CSR format.
/// Within each row column indices are strictly increasing and duplicates
/// are forbidden; use csr_from_triplets to build a canonical instance.
struct SparseMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<int> row_ptr;   // length n_rows + 1
    std::vector<int> col_idx;
    std::vector<double> values;

    int nnz() const { return static_cast<int>(values.size()); }
};

struct Triplet {
    int row;
    int col;
    double value;
};

/// Builds an n x n CSR matrix from an unordered triplet list.
/// Duplicate (row, col) pairs are summed.
inline SparseMatrix csr_from_triplets(int n, std::vector<Triplet> triplets) {
    if (n <= 0) throw std::invalid_argument("csr_from_triplets: n must be positive");
    for (const Triplet& t : triplets) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw std::out_of_range("csr_from_triplets: index (" + std::to_string(t.row) +
                                    ", " + std::to_string(t.col) + ") out of range for n = " +
                                    std::to_string(n));
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix A;
    A.n_rows = n;
    A.n_cols = n;
    A.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
    A.col_idx.reserve(triplets.size());
    A.values.reserve(triplets.size());

    for (size_t k = 0; k < triplets.size();) {
        const int r = triplets[k].row;
        const int c = triplets[k].col;
        double sum = 0.0;
        while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) {
            sum += triplets[k].value;
            ++k;
        }
        A.col_idx.push_back(c);
        A.values.push_back(sum);
        A.row_ptr[static_cast<size_t>(r) + 1] = static_cast<int>(A.values.size());
    }
    // Rows with no entries inherit the previous offset.
    for (int r = 0; r < n; ++r)
        A.row_ptr[static_cast<size_t>(r) + 1] =
            std::max(A.row_ptr[static_cast<size_t>(r) + 1], A.row_ptr[r]);
    return A;
}

/// y = A * x, summed in stored order.
inline void spmv(const SparseMatrix& A, const double* x, double* y) {
    for (int i = 0; i < A.n_rows; ++i) {
        double sum = 0.0;
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
            sum += A.values[k] * x[A.col_idx[k]];
        y[i] = sum;
    }
}

inline std::vector<double> spmv(const SparseMatrix& A, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != A.n_cols)
        throw std::invalid_argument("spmv: dimension mismatch");
    std::vector<double> y(static_cast<size_t>(A.n_rows));
    spmv(A, x.data(), y.data());
    return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace saikry

#endif  // SAIKRY_SPARSE_HPP
