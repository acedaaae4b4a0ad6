#ifndef SAIKRY_DERIVATIVE_HPP
#define SAIKRY_DERIVATIVE_HPP

#include <cmath>
#include <vector>

#include "saikry/krylov.hpp"

namespace saikry {

struct DerivativeParams {
    SaiParams base;
    double delta_gamma = 1e-7;   // absolute finite-difference step
    bool as_printed_cprime = false;  // compatibility: c' from the unprimed remainder
};

/// Twin-recursion SAI Krylov run that additionally estimates the derivative
/// of the residual norm with respect to gamma by finite differences.
/// The primed recursion at gamma' = gamma + delta_gamma reuses the single
/// factorization of I + gamma*A through one preconditioned Richardson
/// correction per step; the unprimed recursion is untouched, so y, residual
/// and iteration count match plain sai_expmv bitwise.
inline KrylovOutcome sai_expmv_with_derivative(const SparseMatrix& A, const LuFactorization& lu,
                                               const std::vector<double>& v,
                                               const DerivativeParams& dp,
                                               KrylovState* state_out = nullptr) {
    const SaiParams& p = dp.base;
    const int n = A.n_rows;
    if (A.n_rows != A.n_cols)
        throw std::invalid_argument("sai_expmv_with_derivative: matrix must be square");
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("sai_expmv_with_derivative: dimension mismatch");
    if (!(dp.delta_gamma > 0.0))
        throw std::invalid_argument("sai_expmv_with_derivative: delta_gamma must be positive");
    if (!(p.gamma > 0.0) || !(p.t > 0.0) || !(p.tol > 0.0) || p.max_iters < 1)
        throw std::invalid_argument("sai_expmv_with_derivative: invalid parameters");

    const double beta = norm2(v);
    if (beta == 0.0) throw std::invalid_argument("sai_expmv_with_derivative: zero starting vector");
    const double gamma_p = p.gamma + dp.delta_gamma;

    const int k = p.max_iters;
    std::vector<std::vector<double>> V, Vp;
    V.reserve(static_cast<size_t>(k) + 1);
    Vp.reserve(static_cast<size_t>(k) + 1);
    {
        std::vector<double> v1(v);
        for (double& x : v1) x /= beta;
        Vp.push_back(v1);
        V.push_back(std::move(v1));
    }
    DenseMatrix Hhat(k + 1, k), Hhat_p(k + 1, k);
    std::vector<double> scratch(static_cast<size_t>(n));
    std::vector<double> u_t;
    bool primed_alive = true;

    KrylovOutcome out;
    for (int i = 1; i <= k; ++i) {
        // Unprimed recursion: identical operation sequence to sai_expmv.
        std::vector<double> w = lu.solve(V[static_cast<size_t>(i) - 1]);
        const double wnorm_pre = norm2(w);
        const double hnext = detail::mgs_step(V, i, w, Hhat, p.reorthogonalize);
        const double c = detail::shifted_image_norm(A, p.gamma, w, scratch);
        detail::ProjectedResidual proj = detail::projected_residual(Hhat, i, c, p.gamma, p.t);
        out.residual_norm = detail::max_abs(proj.samples);
        out.iterations = i;

        // Primed recursion: solve with the gamma factorization, then one
        // Richardson correction toward the gamma' system.
        double resid_p = 0.0;
        if (primed_alive) {
            std::vector<double> wp = lu.solve(Vp[static_cast<size_t>(i) - 1]);
            spmv(A, wp.data(), scratch.data());
            std::vector<double> rbar(static_cast<size_t>(n));
            const std::vector<double>& vpi = Vp[static_cast<size_t>(i) - 1];
            for (int r = 0; r < n; ++r)
                rbar[static_cast<size_t>(r)] =
                    vpi[static_cast<size_t>(r)] -
                    (wp[static_cast<size_t>(r)] + gamma_p * scratch[static_cast<size_t>(r)]);
            std::vector<double> corr = lu.solve(rbar);
            axpy(1.0, corr, wp);

            const double wpnorm_pre = norm2(wp);
            const double hnext_p = detail::mgs_step(Vp, i, wp, Hhat_p, p.reorthogonalize);
            const double cp = dp.as_printed_cprime
                                  ? detail::shifted_image_norm(A, gamma_p, w, scratch)
                                  : detail::shifted_image_norm(A, gamma_p, wp, scratch);
            try {
                detail::ProjectedResidual proj_p =
                    detail::projected_residual(Hhat_p, i, cp, gamma_p, p.t);
                resid_p = detail::max_abs(proj_p.samples);
            } catch (const SingularMatrixError&) {
                primed_alive = false;
            }
            if (primed_alive && hnext_p <= detail::kBreakdownFactor * wpnorm_pre &&
                !(out.residual_norm < p.tol))
                primed_alive = false;  // primed breakdown while unprimed continues
            if (primed_alive && hnext_p > detail::kBreakdownFactor * wpnorm_pre) {
                std::vector<double> vnext_p = std::move(wp);
                for (double& x : vnext_p) x /= hnext_p;
                Vp.push_back(std::move(vnext_p));
            }
        }

        u_t = std::move(proj.u_t);
        const bool breakdown = hnext <= detail::kBreakdownFactor * wnorm_pre;
        if (!breakdown) {
            std::vector<double> vnext = std::move(w);
            for (double& x : vnext) x /= hnext;
            V.push_back(std::move(vnext));
        }
        if (out.residual_norm < p.tol) {
            out.converged = true;
            if (primed_alive)
                out.derivative = (resid_p - out.residual_norm) / (gamma_p - p.gamma);
            break;
        }
        if (breakdown) {
            out.converged = out.residual_norm < p.tol;
            break;
        }
    }
    out.derivative_warning = !primed_alive;

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

inline KrylovOutcome sai_expmv_with_derivative(const SparseMatrix& A, const std::vector<double>& v,
                                               const DerivativeParams& dp,
                                               KrylovState* state_out = nullptr) {
    LuFactorization lu(A, dp.base.gamma);
    return sai_expmv_with_derivative(A, lu, v, dp, state_out);
}

}  // namespace saikry

#endif  // SAIKRY_DERIVATIVE_HPP
