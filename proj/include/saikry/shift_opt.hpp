#ifndef SAIKRY_SHIFT_OPT_HPP
#define SAIKRY_SHIFT_OPT_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "saikry/derivative.hpp"
#include "saikry/krylov.hpp"

namespace saikry {

/// Search bracket for delta = gamma / t.
struct ShiftInterval {
    double lo = 0.01;
    double hi = 0.1;
};

struct OptimizeConfig {
    std::vector<std::vector<double>> trial_vectors;  // N trial initial states
    int fixed_iters = 25;                            // K
    double tol = 1e-6;                               // epsilon
    double t = 0.0;
    double brent_tol = 1e-5;
    int max_brent_iters = 50;
};

struct BrentResult {
    double x_min = 0.0;
    double f_min = 0.0;
    int evals = 0;
    bool converged = true;
};

/// Bounded scalar minimization combining golden-section steps with
/// successive parabolic interpolation (Brent), absolute x-tolerance.
inline BrentResult brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                                  double tol, int max_iters) {
    if (!(lo < hi)) throw std::invalid_argument("brent_minimize: requires lo < hi");
    const double sqrt_eps = std::sqrt(2.2e-16);
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));

    double a = lo, b = hi;
    double fulc = a + golden * (b - a);
    double nfc = fulc, xf = fulc;
    double rat = 0.0, e = 0.0;
    double fx = f(xf);
    int num = 1;
    double ffulc = fx, fnfc = fx;
    double xm = 0.5 * (a + b);
    double tol1 = sqrt_eps * std::fabs(xf) + tol / 3.0;
    double tol2 = 2.0 * tol1;
    bool converged = true;

    while (std::fabs(xf - xm) > (tol2 - 0.5 * (b - a))) {
        bool use_golden = true;
        if (std::fabs(e) > tol1) {
            // Parabolic fit through (xf, nfc, fulc).
            use_golden = false;
            double r = (xf - nfc) * (fx - ffulc);
            double q = (xf - fulc) * (fx - fnfc);
            double pp = (xf - fulc) * q - (xf - nfc) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) pp = -pp;
            q = std::fabs(q);
            r = e;
            e = rat;
            if (std::fabs(pp) < std::fabs(0.5 * q * r) && pp > q * (a - xf) && pp < q * (b - xf)) {
                rat = pp / q;
                const double x_try = xf + rat;
                if ((x_try - a) < tol2 || (b - x_try) < tol2) {
                    const double si = (xm - xf >= 0.0 ? 1.0 : -1.0);
                    rat = tol1 * si;
                }
            } else {
                use_golden = true;
            }
        }
        if (use_golden) {
            e = (xf >= xm) ? a - xf : b - xf;
            rat = golden * e;
        }
        const double si = (rat >= 0.0 ? 1.0 : -1.0);
        const double x = xf + si * std::max(std::fabs(rat), tol1);
        const double fu = f(x);
        ++num;

        if (fu <= fx) {
            if (x >= xf) a = xf; else b = xf;
            fulc = nfc; ffulc = fnfc;
            nfc = xf; fnfc = fx;
            xf = x; fx = fu;
        } else {
            if (x < xf) a = x; else b = x;
            if (fu <= fnfc || nfc == xf) {
                fulc = nfc; ffulc = fnfc;
                nfc = x; fnfc = fu;
            } else if (fu <= ffulc || fulc == xf || fulc == nfc) {
                fulc = x; ffulc = fu;
            }
        }
        xm = 0.5 * (a + b);
        tol1 = sqrt_eps * std::fabs(xf) + tol / 3.0;
        tol2 = 2.0 * tol1;
        if (num >= max_iters) {
            converged = false;
            break;
        }
    }
    return BrentResult{xf, fx, num, converged};
}

/// Mean residual norm after at most K Arnoldi iterations over the trial
/// vectors, one factorization per call. Early convergence contributes the
/// converged residual; solver breakdown makes the objective +inf.
inline double mean_residual_objective(const SparseMatrix& A, const OptimizeConfig& cfg,
                                      double delta) {
    if (cfg.trial_vectors.empty())
        throw std::invalid_argument("mean_residual_objective: need at least one trial vector");
    if (cfg.fixed_iters < 1)
        throw std::invalid_argument("mean_residual_objective: K must be positive");
    SaiParams p;
    p.gamma = delta * cfg.t;
    p.t = cfg.t;
    p.tol = cfg.tol;
    p.max_iters = cfg.fixed_iters;
    try {
        LuFactorization lu(A, p.gamma);
        double sum = 0.0;
        for (const std::vector<double>& x : cfg.trial_vectors)
            sum += sai_expmv(A, lu, x, p).residual_norm;
        return sum / static_cast<double>(cfg.trial_vectors.size());
    } catch (const FactorizationError&) {
        return std::numeric_limits<double>::infinity();
    } catch (const SingularMatrixError&) {
        return std::numeric_limits<double>::infinity();
    }
}

struct OptimizeResult {
    double delta_star = 0.0;
    double objective = 0.0;
    int evals = 0;  // objective evaluations = sparse LU factorizations
    bool converged = true;
};

/// Pre-processing stage: minimize the mean residual objective over the
/// bracket; the caller then freezes gamma* = delta* * t for later vectors.
inline OptimizeResult optimize_and_run(const SparseMatrix& A, const OptimizeConfig& cfg,
                                       const ShiftInterval& interval) {
    const BrentResult br = brent_minimize(
        [&](double d) { return mean_residual_objective(A, cfg, d); }, interval.lo, interval.hi,
        cfg.brent_tol, cfg.max_brent_iters);
    return OptimizeResult{br.x_min, br.f_min, br.evals, br.converged};
}

struct IncrementalState {
    ShiftInterval interval;
    std::optional<double> converged_delta;
    double stop_width = 1e-5;
    int vectors_processed = 0;
};

/// Bisection step on the shift bracket driven by the derivative sign.
/// A zero derivative takes the negative branch (deterministic tie rule).
inline ShiftInterval bisect_interval(const ShiftInterval& iv, double delta, double r_gamma) {
    ShiftInterval next = iv;
    if (r_gamma > 0.0)
        next.hi = delta;
    else
        next.lo = delta;
    return next;
}

inline double interval_midpoint(const ShiftInterval& iv) { return 0.5 * (iv.lo + iv.hi); }

/// One phase-1 step of the incremental method: run the derivative-augmented
/// solver at the bracket midpoint and bisect on the derivative sign.
/// An absent derivative (primed breakdown) leaves the bracket unchanged.
inline std::pair<KrylovOutcome, IncrementalState> incremental_update(
    const IncrementalState& state, const SparseMatrix& A, const std::vector<double>& v,
    DerivativeParams dp, double t) {
    if (state.converged_delta)
        throw std::logic_error("incremental_update: state already converged");
    const double delta = interval_midpoint(state.interval);
    dp.base.gamma = delta * t;
    dp.base.t = t;
    KrylovOutcome outcome = sai_expmv_with_derivative(A, v, dp);

    IncrementalState next = state;
    ++next.vectors_processed;
    if (outcome.derivative) {
        next.interval = bisect_interval(state.interval, delta, *outcome.derivative);
        if (next.interval.hi - next.interval.lo <= next.stop_width) next.converged_delta = delta;
    }
    return {std::move(outcome), std::move(next)};
}

/// Sequential driver over a stream of vectors: phase 1 updates the bracket
/// (one new factorization per vector), phase 2 reuses a single factorization
/// at the converged shift without derivative estimation.
class IncrementalDriver {
  public:
    IncrementalDriver(const SparseMatrix& A, ShiftInterval interval, double t, double tol,
                      int max_iters, double delta_gamma = 1e-7)
        : A_(A), t_(t), tol_(tol), max_iters_(max_iters), delta_gamma_(delta_gamma) {
        state_.interval = interval;
    }

    KrylovOutcome process(const std::vector<double>& v) {
        if (state_.converged_delta) {
            if (!fixed_lu_) {
                fixed_lu_.emplace(A_, *state_.converged_delta * t_);
                ++lu_count_;
            }
            last_delta_ = *state_.converged_delta;
            SaiParams p{last_delta_ * t_, t_, tol_, max_iters_};
            ++state_.vectors_processed;
            return sai_expmv(A_, *fixed_lu_, v, p);
        }
        DerivativeParams dp;
        dp.base.tol = tol_;
        dp.base.max_iters = max_iters_;
        dp.delta_gamma = delta_gamma_;
        last_delta_ = interval_midpoint(state_.interval);
        ++lu_count_;
        auto [outcome, next] = incremental_update(state_, A_, v, dp, t_);
        state_ = std::move(next);
        return outcome;
    }

    const IncrementalState& state() const { return state_; }
    int lu_count() const { return lu_count_; }
    double last_delta() const { return last_delta_; }
    bool in_phase_two() const { return state_.converged_delta.has_value(); }

  private:
    const SparseMatrix& A_;
    double t_;
    double tol_;
    int max_iters_;
    double delta_gamma_;
    IncrementalState state_;
    std::optional<LuFactorization> fixed_lu_;
    int lu_count_ = 0;
    double last_delta_ = 0.0;
};

}  // namespace saikry

#endif  // SAIKRY_SHIFT_OPT_HPP
