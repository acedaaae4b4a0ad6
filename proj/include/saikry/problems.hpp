#ifndef SAIKRY_PROBLEMS_HPP
#define SAIKRY_PROBLEMS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "saikry/sparse.hpp"

namespace saikry {

/// Uniform grid of n interior points per dimension on [lo, hi]^2 with
/// eliminated Dirichlet boundaries; node (ix, iy) sits at
/// (lo + (ix+1)h, lo + (iy+1)h), h = (hi - lo)/(n+1).
struct Grid2D {
    int n = 0;
    double lo = 0.0;
    double hi = 1.0;

    double h() const { return (hi - lo) / static_cast<double>(n + 1); }
    double x(int ix) const { return lo + static_cast<double>(ix + 1) * h(); }
    double y(int iy) const { return lo + static_cast<double>(iy + 1) * h(); }
    // Cell face between nodes i and i+1; i = -1 addresses the boundary face.
    double face(int i) const { return lo + (static_cast<double>(i + 1) + 0.5) * h(); }
    int index(int ix, int iy) const { return iy * n + ix; }
    int size() const { return n * n; }
};

/// Convection-diffusion on [0,1]^2 with piecewise constant diffusion and
/// divergence-free convection field, Dirichlet boundaries.
struct ConvDiffSpec {
    int n = 200;
    double peclet = 1000.0;

    Grid2D grid() const { return Grid2D{n, 0.0, 1.0}; }
};

/// Rotated anisotropic diffusion on [-1,1]^2, Dirichlet boundaries.
struct AnisoSpec {
    int n = 128;
    double lambda = 5000.0;
    double theta = M_PI / 4.0;

    Grid2D grid() const { return Grid2D{n, -1.0, 1.0}; }
};

struct InitialStateSpec {
    std::uint64_t seed = 0;
    double covariance_scale = 0.05;
    int count = 1;
};

namespace detail {

inline double convdiff_d1(double x, double y) {
    return (x >= 0.25 && x <= 0.75 && y >= 0.25 && y <= 0.75) ? 1000.0 : 0.1;
}
inline double convdiff_d2(double x, double y) { return 0.5 * convdiff_d1(x, y); }
inline double convdiff_v1(double x, double y) { return x + y; }
inline double convdiff_v2(double x, double y) { return x - y; }

}  // namespace detail

/// A = -L where L u = (D1 u_x)_x + (D2 u_y)_y + (Pe/2)(v1 u_x + v2 u_y +
/// (v1 u)_x + (v2 u)_y). Diffusion in flux form with face-midpoint
/// coefficients (symmetric part); convection in the split central form
/// (exactly skew-symmetric part). Coefficients are pluggable so degenerate
/// cases (constant D, pure convection) stay testable.
template <typename D1F, typename D2F, typename V1F, typename V2F>
SparseMatrix build_convdiff_operator(const Grid2D& g, double peclet, D1F d1, D2F d2, V1F v1,
                                     V2F v2) {
    if (g.n < 3) throw std::invalid_argument("build_convdiff: n must be >= 3");
    const int n = g.n;
    const double h = g.h();
    const double inv_h2 = 1.0 / (h * h);
    const double quarter_pe_h = peclet / (4.0 * h);

    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(g.size()) * 5);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const int row = g.index(ix, iy);
            const double x = g.x(ix), y = g.y(iy);
            // Face coordinates come from the lower node index so shared
            // faces evaluate D at bitwise-identical points.
            const double de = d1(g.face(ix), y);
            const double dw = d1(g.face(ix - 1), y);
            const double dn = d2(x, g.face(iy));
            const double ds = d2(x, g.face(iy - 1));
            const double v1c = v1(x, y);
            const double v2c = v2(x, y);

            double diag = (de + dw + dn + ds) * inv_h2;
            trips.push_back({row, row, diag});
            if (ix + 1 < n) {
                const double v1e = v1(g.x(ix + 1), y);
                trips.push_back({row, g.index(ix + 1, iy),
                                 -de * inv_h2 - quarter_pe_h * (v1c + v1e)});
            }
            if (ix > 0) {
                const double v1w = v1(g.x(ix - 1), y);
                trips.push_back({row, g.index(ix - 1, iy),
                                 -dw * inv_h2 + quarter_pe_h * (v1c + v1w)});
            }
            if (iy + 1 < n) {
                const double v2n = v2(x, g.y(iy + 1));
                trips.push_back({row, g.index(ix, iy + 1),
                                 -dn * inv_h2 - quarter_pe_h * (v2c + v2n)});
            }
            if (iy > 0) {
                const double v2s = v2(x, g.y(iy - 1));
                trips.push_back({row, g.index(ix, iy - 1),
                                 -ds * inv_h2 + quarter_pe_h * (v2c + v2s)});
            }
        }
    }
    return csr_from_triplets(g.size(), std::move(trips));
}

inline SparseMatrix build_convdiff(const ConvDiffSpec& spec) {
    return build_convdiff_operator(spec.grid(), spec.peclet, detail::convdiff_d1,
                                   detail::convdiff_d2, detail::convdiff_v1,
                                   detail::convdiff_v2);
}

/// A = -div(Q^T Lambda Q grad u) on the 9-point stencil: axis terms by
/// central second differences, the mixed term by the 4-corner cross
/// difference. Exactly symmetric. The mesh factor h^2 is absorbed into the
/// stencil (the usual unscaled-stencil convention for this benchmark), so
/// the entries are mesh-independent combinations of the coefficient tensor;
/// only the grid geometry (state sampling) depends on n.
inline SparseMatrix build_aniso(const AnisoSpec& spec) {
    if (spec.n < 3) throw std::invalid_argument("build_aniso: n must be >= 3");
    if (!(spec.lambda > 0.0)) throw std::invalid_argument("build_aniso: lambda must be positive");
    const Grid2D g = spec.grid();
    const int n = g.n;

    const double c = std::cos(spec.theta), s = std::sin(spec.theta);
    const double c11 = c * c + spec.lambda * s * s;
    const double c22 = s * s + spec.lambda * c * c;
    const double c12 = (spec.lambda - 1.0) * s * c;

    const double diag = 2.0 * (c11 + c22);
    const double ew = -c11;
    const double ns = -c22;
    const double corner_pp = -c12 * 0.5;  // (+1,+1) and (-1,-1)
    const double corner_pm = c12 * 0.5;   // (+1,-1) and (-1,+1)

    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(g.size()) * 9);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const int row = g.index(ix, iy);
            trips.push_back({row, row, diag});
            if (ix + 1 < n) trips.push_back({row, g.index(ix + 1, iy), ew});
            if (ix > 0) trips.push_back({row, g.index(ix - 1, iy), ew});
            if (iy + 1 < n) trips.push_back({row, g.index(ix, iy + 1), ns});
            if (iy > 0) trips.push_back({row, g.index(ix, iy - 1), ns});
            if (corner_pp != 0.0 || corner_pm != 0.0) {
                if (ix + 1 < n && iy + 1 < n)
                    trips.push_back({row, g.index(ix + 1, iy + 1), corner_pp});
                if (ix > 0 && iy > 0) trips.push_back({row, g.index(ix - 1, iy - 1), corner_pp});
                if (ix + 1 < n && iy > 0) trips.push_back({row, g.index(ix + 1, iy - 1), corner_pm});
                if (ix > 0 && iy + 1 < n) trips.push_back({row, g.index(ix - 1, iy + 1), corner_pm});
            }
        }
    }
    return csr_from_triplets(g.size(), std::move(trips));
}

namespace detail {

// 53-bit uniform in [0, 1), independent of libstdc++ distribution internals.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Gaussian-bump initial state: bivariate normal density with covariance
/// covariance_scale * I centered at mu, sampled on the grid nodes.
inline std::vector<double> gaussian_state(const Grid2D& grid, double mu_x, double mu_y,
                                          double covariance_scale) {
    const double sigma = covariance_scale;
    const double norm = 1.0 / (2.0 * M_PI * sigma);
    std::vector<double> v(static_cast<size_t>(grid.size()));
    for (int iy = 0; iy < grid.n; ++iy) {
        for (int ix = 0; ix < grid.n; ++ix) {
            const double dx = grid.x(ix) - mu_x;
            const double dy = grid.y(iy) - mu_y;
            v[static_cast<size_t>(grid.index(ix, iy))] =
                norm * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma));
        }
    }
    return v;
}

/// Seeded family of Gaussian-bump states with means drawn uniformly from the
/// domain. Vector i is seeded independently of count, so prefixes agree.
inline std::vector<std::vector<double>> gaussian_states(const InitialStateSpec& spec,
                                                        const Grid2D& grid) {
    if (!(spec.covariance_scale > 0.0))
        throw std::invalid_argument("gaussian_states: covariance_scale must be positive");
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                          static_cast<std::uint32_t>(spec.seed >> 32),
                          static_cast<std::uint32_t>(i)};
        std::mt19937_64 gen(seq);
        const double mu_x = grid.lo + (grid.hi - grid.lo) * detail::uniform01(gen);
        const double mu_y = grid.lo + (grid.hi - grid.lo) * detail::uniform01(gen);
        out.push_back(gaussian_state(grid, mu_x, mu_y, spec.covariance_scale));
    }
    return out;
}

/// Alternative generator with i.i.d. standard normal entries, for
/// sensitivity checks.
inline std::vector<std::vector<double>> normal_entry_states(const InitialStateSpec& spec,
                                                            const Grid2D& grid) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                          static_cast<std::uint32_t>(spec.seed >> 32),
                          static_cast<std::uint32_t>(i), 0x9e3779b9u};
        std::mt19937_64 gen(seq);
        std::vector<double> v(static_cast<size_t>(grid.size()));
        for (size_t j = 0; j < v.size(); j += 2) {
            // Box-Muller, avoiding log(0).
            const double u1 = 1.0 - detail::uniform01(gen);
            const double u2 = detail::uniform01(gen);
            const double r = std::sqrt(-2.0 * std::log(u1));
            v[j] = r * std::cos(2.0 * M_PI * u2);
            if (j + 1 < v.size()) v[j + 1] = r * std::sin(2.0 * M_PI * u2);
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace saikry

#endif  // SAIKRY_PROBLEMS_HPP
