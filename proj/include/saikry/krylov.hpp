#ifndef SAIKRY_KRYLOV_HPP
#define SAIKRY_KRYLOV_HPP

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "saikry/dense.hpp"
#include "saikry/lu.hpp"
#include "saikry/sparse.hpp"

namespace saikry {

struct SaiParams {
    double gamma = 0.0;     // shift, gamma = delta * t
    double t = 0.0;         // time
    double tol = 1e-6;      // residual tolerance (relative to ||v||)
    int max_iters = 300;
    bool reorthogonalize = false;  // optional second MGS pass, off by default
};

struct KrylovOutcome {
    std::vector<double> y;
    double residual_norm = 0.0;  // max over the three sample times
    int iterations = 0;
    bool converged = false;
    std::optional<double> derivative;  // r_gamma, filled by the derivative variant
    bool derivative_warning = false;   // primed recursion broke down
};

/// Arnoldi basis and projection, exposed for invariant checks.
struct KrylovState {
    std::vector<std::vector<double>> V;  // orthonormal columns, iter (+1 unless breakdown)
    DenseMatrix H_hat;                   // (max_iters+1) x max_iters, leading block filled
    double beta = 0.0;
    int iter = 0;
};

namespace detail {

inline constexpr double kBreakdownFactor = 1e-14;

// Modified Gram-Schmidt of w against V[0..i-1]; coefficients accumulate into
// column i-1 of Hhat. Returns ||w|| after orthogonalization.
inline double mgs_step(const std::vector<std::vector<double>>& V, int i, std::vector<double>& w,
                       DenseMatrix& Hhat, bool reorth) {
    for (int j = 0; j < i; ++j) {
        const double h = dot(w, V[j]);
        Hhat(j, i - 1) = h;
        axpy(-h, V[j], w);
    }
    if (reorth) {
        for (int j = 0; j < i; ++j) {
            const double h = dot(w, V[j]);
            Hhat(j, i - 1) += h;
            axpy(-h, V[j], w);
        }
    }
    const double hnext = norm2(w);
    Hhat(i, i - 1) = hnext;
    return hnext;
}

// ||(I + gamma*A) w||_2
inline double shifted_image_norm(const SparseMatrix& A, double gamma, const std::vector<double>& w,
                                 std::vector<double>& scratch) {
    spmv(A, w.data(), scratch.data());
    double s = 0.0;
    for (size_t r = 0; r < w.size(); ++r) {
        const double e = w[r] + gamma * scratch[r];
        s += e * e;
    }
    return std::sqrt(s);
}

struct ProjectedResidual {
    std::array<double, 3> samples{};   // r_j at s = t/3, 2t/3, t
    std::vector<double> u_t;           // exp(-t H) e1, reused for the final evaluation
};

// Residual samples of Alg.-1 style stopping: invert the leading i x i block of
// Hhat, back-transform H = (Htilde - I)/gamma, and evaluate
// r_j = (c/gamma) |e_i^T Htilde exp(-s_j H) e_1| at s = [t/3, 2t/3, t].
inline ProjectedResidual projected_residual(const DenseMatrix& Hhat, int i, double c, double gamma,
                                            double t) {
    DenseMatrix Hi(i, i);
    for (int r = 0; r < i; ++r)
        for (int j = 0; j < i; ++j) Hi(r, j) = Hhat(r, j);
    const DenseMatrix Htilde = hessenberg_inverse(Hi);
    DenseMatrix H = scaled(Htilde, 1.0 / gamma);
    add_diagonal(H, -1.0 / gamma);

    ProjectedResidual out;
    for (int j = 0; j < 3; ++j) {
        const double s = t * static_cast<double>(j + 1) / 3.0;
        const DenseMatrix E = expm(scaled(H, -s));
        std::vector<double> u(static_cast<size_t>(i));
        for (int r = 0; r < i; ++r) u[static_cast<size_t>(r)] = E(r, 0);
        double dtHu = 0.0;
        for (int r = 0; r < i; ++r) dtHu += Htilde(i - 1, r) * u[static_cast<size_t>(r)];
        out.samples[static_cast<size_t>(j)] = (c / gamma) * std::fabs(dtHu);
        if (j == 2) out.u_t = std::move(u);
    }
    return out;
}

inline double max_abs(const std::array<double, 3>& r) {
    return std::max(std::fabs(r[0]), std::max(std::fabs(r[1]), std::fabs(r[2])));
}

}  // namespace detail

/// Residual samples at s = [t/3, 2t/3, t] for the current Arnoldi step,
/// w being the unnormalized orthogonalized remainder.
inline std::array<double, 3> residual_samples(const KrylovState& state, const SaiParams& p,
                                              const SparseMatrix& A, const std::vector<double>& w) {
    if (state.iter < 1) throw std::invalid_argument("residual_samples: state has no iterations");
    std::vector<double> scratch(w.size());
    const double c = detail::shifted_image_norm(A, p.gamma, w, scratch);
    return detail::projected_residual(state.H_hat, state.iter, c, p.gamma, p.t).samples;
}

/// Shift-and-invert Krylov approximation of exp(-t A) v using a prebuilt
/// factorization of I + gamma*A. The residual is computed for the normalized
/// starting vector, so tol is relative to ||v||_2.
inline KrylovOutcome sai_expmv(const SparseMatrix& A, const LuFactorization& lu,
                               const std::vector<double>& v, const SaiParams& p,
                               KrylovState* state_out = nullptr) {
    const int n = A.n_rows;
    if (A.n_rows != A.n_cols) throw std::invalid_argument("sai_expmv: matrix must be square");
    if (static_cast<int>(v.size()) != n) throw std::invalid_argument("sai_expmv: dimension mismatch");
    if (lu.size() != n) throw std::invalid_argument("sai_expmv: factorization size mismatch");
    if (!(p.gamma > 0.0) || !(p.t > 0.0) || !(p.tol > 0.0) || p.max_iters < 1)
        throw std::invalid_argument("sai_expmv: invalid parameters");

    const double beta = norm2(v);
    if (beta == 0.0) throw std::invalid_argument("sai_expmv: zero starting vector");

    const int k = p.max_iters;
    std::vector<std::vector<double>> V;
    V.reserve(static_cast<size_t>(k) + 1);
    {
        std::vector<double> v1(v);
        for (double& x : v1) x /= beta;
        V.push_back(std::move(v1));
    }
    DenseMatrix Hhat(k + 1, k);
    std::vector<double> scratch(static_cast<size_t>(n));
    std::vector<double> u_t;

    KrylovOutcome out;
    for (int i = 1; i <= k; ++i) {
        std::vector<double> w = lu.solve(V[static_cast<size_t>(i) - 1]);
        const double wnorm_pre = norm2(w);
        const double hnext = detail::mgs_step(V, i, w, Hhat, p.reorthogonalize);

        const double c = detail::shifted_image_norm(A, p.gamma, w, scratch);
        detail::ProjectedResidual proj = detail::projected_residual(Hhat, i, c, p.gamma, p.t);
        out.residual_norm = detail::max_abs(proj.samples);
        out.iterations = i;
        u_t = std::move(proj.u_t);

        const bool breakdown = hnext <= detail::kBreakdownFactor * wnorm_pre;
        if (!breakdown) {
            std::vector<double> vnext = std::move(w);
            for (double& x : vnext) x /= hnext;
            V.push_back(std::move(vnext));
        }
        if (out.residual_norm < p.tol) {
            out.converged = true;
            break;
        }
        if (breakdown) {
            // Lucky breakdown: the subspace is invariant, finalize here.
            out.converged = out.residual_norm < p.tol;
            break;
        }
        // i == k: max_iters exhausted, best-effort result
    }

    const int m = out.iterations;
    out.y.assign(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < m; ++j) {
        const double coef = beta * u_t[static_cast<size_t>(j)];
        axpy(coef, V[static_cast<size_t>(j)], out.y);
    }

    if (state_out) {
        state_out->V = std::move(V);
        state_out->H_hat = std::move(Hhat);
        state_out->beta = beta;
        state_out->iter = m;
    }
    return out;
}

inline KrylovOutcome sai_expmv(const SparseMatrix& A, const std::vector<double>& v,
                               const SaiParams& p, KrylovState* state_out = nullptr) {
    LuFactorization lu(A, p.gamma);
    return sai_expmv(A, lu, v, p, state_out);
}

}  // namespace saikry

#endif  // SAIKRY_KRYLOV_HPP
