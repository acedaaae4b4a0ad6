#ifndef SAIKRY_LU_HPP
#define SAIKRY_LU_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "saikry/sparse.hpp"

namespace saikry {

struct FactorizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sparse direct factorization of M = I + gamma*A, reusable for many solves.
/// Immutable after construction; concurrent solves are safe apart from the
/// solve counter, which is kept for cost instrumentation only.
class LuFactorization {
  public:
    LuFactorization(const SparseMatrix& A, double gamma) : n_(A.n_rows), gamma_(gamma) {
        if (A.n_rows != A.n_cols)
            throw std::invalid_argument("shifted_lu: matrix must be square");
        if (!(gamma > 0.0)) throw std::invalid_argument("shifted_lu: gamma must be positive");

        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(A.values.size() + static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            bool has_diag = false;
            for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
                const int j = A.col_idx[k];
                double v = gamma * A.values[k];
                if (j == i) {
                    v += 1.0;
                    has_diag = true;
                }
                trips.emplace_back(i, j, v);
            }
            if (!has_diag) trips.emplace_back(i, i, 1.0);
        }
        Eigen::SparseMatrix<double> M(n_, n_);
        M.setFromTriplets(trips.begin(), trips.end());
        M.makeCompressed();

        solver_ = std::make_unique<Solver>();
        solver_->analyzePattern(M);
        solver_->factorize(M);
        if (solver_->info() != Eigen::Success)
            throw FactorizationError("shifted_lu: factorization of I + gamma*A failed: " +
                                     solver_->lastErrorMessage());
    }

    int size() const { return n_; }
    double gamma() const { return gamma_; }

    void solve(const double* b, double* x) const {
        Eigen::Map<const Eigen::VectorXd> bv(b, n_);
        Eigen::Map<Eigen::VectorXd> xv(x, n_);
        xv = solver_->solve(bv);
        ++solve_count_;
    }

    std::vector<double> solve(const std::vector<double>& b) const {
        if (static_cast<int>(b.size()) != n_)
            throw std::invalid_argument("lu_solve: dimension mismatch");
        std::vector<double> x(b.size());
        solve(b.data(), x.data());
        return x;
    }

    /// Number of triangular solves performed so far (instrumentation).
    long solve_count() const { return solve_count_; }
    void reset_solve_count() const { solve_count_ = 0; }

  private:
    using Solver = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;
    int n_;
    double gamma_;
    std::unique_ptr<Solver> solver_;
    mutable long solve_count_ = 0;
};

inline LuFactorization shifted_lu(const SparseMatrix& A, double gamma) {
    return LuFactorization(A, gamma);
}

inline std::vector<double> lu_solve(const LuFactorization& f, const std::vector<double>& b) {
    return f.solve(b);
}

}  // namespace saikry

#endif  // SAIKRY_LU_HPP
