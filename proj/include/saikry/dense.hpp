#ifndef SAIKRY_DENSE_HPP
#define SAIKRY_DENSE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace saikry {

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Small dense row-major matrix used for the projected problem.
struct DenseMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<double> values;  // row-major

    DenseMatrix() = default;
    DenseMatrix(int rows, int cols)
        : n_rows(rows), n_cols(cols),
          values(static_cast<size_t>(rows) * static_cast<size_t>(cols), 0.0) {}

    double& operator()(int i, int j) { return values[static_cast<size_t>(i) * n_cols + j]; }
    double operator()(int i, int j) const { return values[static_cast<size_t>(i) * n_cols + j]; }

    static DenseMatrix identity(int n) {
        DenseMatrix I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }
};

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.n_cols != b.n_rows) throw std::invalid_argument("matmul: dimension mismatch");
    DenseMatrix c(a.n_rows, b.n_cols);
    for (int i = 0; i < a.n_rows; ++i) {
        double* ci = &c.values[static_cast<size_t>(i) * c.n_cols];
        for (int k = 0; k < a.n_cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* bk = &b.values[static_cast<size_t>(k) * b.n_cols];
            for (int j = 0; j < b.n_cols; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

inline DenseMatrix scaled(const DenseMatrix& a, double alpha) {
    DenseMatrix c = a;
    for (double& v : c.values) v *= alpha;
    return c;
}

inline void add_inplace(DenseMatrix& a, const DenseMatrix& b, double alpha = 1.0) {
    for (size_t i = 0; i < a.values.size(); ++i) a.values[i] += alpha * b.values[i];
}

inline void add_diagonal(DenseMatrix& a, double alpha) {
    for (int i = 0; i < a.n_rows; ++i) a(i, i) += alpha;
}

inline double one_norm(const DenseMatrix& a) {
    double best = 0.0;
    for (int j = 0; j < a.n_cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < a.n_rows; ++i) s += std::fabs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

/// Solves A X = B in place of B via Gaussian elimination with partial
/// pivoting. A is destroyed.
inline void solve_inplace(DenseMatrix& a, DenseMatrix& b) {
    const int n = a.n_rows;
    const int m = b.n_cols;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::fabs(a(i, k)) > best) {
                best = std::fabs(a(i, k));
                piv = i;
            }
        }
        if (best == 0.0) throw SingularMatrixError("dense solve: exactly singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (int j = 0; j < m; ++j) std::swap(b(k, j), b(piv, j));
        }
        for (int i = k + 1; i < n; ++i) {
            const double l = a(i, k) / a(k, k);
            if (l == 0.0) continue;
            a(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
            for (int j = 0; j < m; ++j) b(i, j) -= l * b(k, j);
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        for (int j = 0; j < m; ++j) {
            double s = b(k, j);
            for (int i = k + 1; i < n; ++i) s -= a(k, i) * b(i, j);
            b(k, j) = s / a(k, k);
        }
    }
}

namespace detail {

// Degree-13 diagonal Pade numerator coefficients.
inline constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

inline constexpr double kTheta13 = 5.371920351148152;

}  // namespace detail

/// Matrix exponential by scaling-and-squaring with the degree-13 diagonal
/// Pade approximant.
inline DenseMatrix expm(const DenseMatrix& m) {
    if (m.n_rows != m.n_cols) throw std::invalid_argument("expm: matrix must be square");
    for (double v : m.values)
        if (!std::isfinite(v)) throw std::invalid_argument("expm: non-finite entry");
    const int n = m.n_rows;

    const double norm = one_norm(m);
    int squarings = 0;
    if (norm > detail::kTheta13)
        squarings = static_cast<int>(std::ceil(std::log2(norm / detail::kTheta13)));
    DenseMatrix a = scaled(m, std::ldexp(1.0, -squarings));

    const double* b = detail::kPade13;
    const DenseMatrix a2 = matmul(a, a);
    const DenseMatrix a4 = matmul(a2, a2);
    const DenseMatrix a6 = matmul(a2, a4);

    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    DenseMatrix w = scaled(a6, b[13]);
    add_inplace(w, a4, b[11]);
    add_inplace(w, a2, b[9]);
    DenseMatrix u = matmul(a6, w);
    add_inplace(u, a6, b[7]);
    add_inplace(u, a4, b[5]);
    add_inplace(u, a2, b[3]);
    add_diagonal(u, b[1]);
    u = matmul(a, u);

    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    DenseMatrix z = scaled(a6, b[12]);
    add_inplace(z, a4, b[10]);
    add_inplace(z, a2, b[8]);
    DenseMatrix v = matmul(a6, z);
    add_inplace(v, a6, b[6]);
    add_inplace(v, a4, b[4]);
    add_inplace(v, a2, b[2]);
    add_diagonal(v, b[0]);

    // (V - U) R = (V + U)
    DenseMatrix lhs = v;
    add_inplace(lhs, u, -1.0);
    DenseMatrix r = v;
    add_inplace(r, u, 1.0);
    solve_inplace(lhs, r);

    for (int s = 0; s < squarings; ++s) r = matmul(r, r);
    return r;
}

/// Inverse of a nonsingular upper-Hessenberg matrix. Elimination touches
/// only the single subdiagonal; pivoting picks between the two candidate
/// rows at each step. A pivot below 1e-14 * ||H|| signals Krylov breakdown.
inline DenseMatrix hessenberg_inverse(const DenseMatrix& h) {
    if (h.n_rows != h.n_cols)
        throw std::invalid_argument("hessenberg_inverse: matrix must be square");
    const int n = h.n_rows;
    const double pivot_floor = 1e-14 * one_norm(h);

    DenseMatrix a = h;
    DenseMatrix inv = DenseMatrix::identity(n);
    for (int k = 0; k < n; ++k) {
        if (k + 1 < n && std::fabs(a(k + 1, k)) > std::fabs(a(k, k))) {
            for (int j = 0; j < n; ++j) {
                std::swap(a(k, j), a(k + 1, j));
                std::swap(inv(k, j), inv(k + 1, j));
            }
        }
        if (std::fabs(a(k, k)) <= pivot_floor)
            throw SingularMatrixError("hessenberg_inverse: numerically singular pivot");
        if (k + 1 < n) {
            const double l = a(k + 1, k) / a(k, k);
            if (l != 0.0) {
                a(k + 1, k) = 0.0;
                for (int j = k + 1; j < n; ++j) a(k + 1, j) -= l * a(k, j);
                for (int j = 0; j < n; ++j) inv(k + 1, j) -= l * inv(k, j);
            }
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        for (int j = 0; j < n; ++j) {
            double s = inv(k, j);
            for (int i = k + 1; i < n; ++i) s -= a(k, i) * inv(i, j);
            inv(k, j) = s / a(k, k);
        }
    }
    return inv;
}

}  // namespace saikry

#endif  // SAIKRY_DENSE_HPP
