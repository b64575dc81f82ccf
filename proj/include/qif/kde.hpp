#pragma once

#include <cmath>
#include <vector>

#include "qif/distribution.hpp"
#include "qif/grid.hpp"
#include "qif/parallel.hpp"
#include "qif/particles.hpp"

namespace qif::flow {

namespace detail {

/// Per-axis Gaussian kernel factors. The 2-D kernel
/// exp(-|c - x|^2 / (2 sigma^2)) separates into gx(cx, x) * gy(cy, y), so the
/// R x N factor matrices let the R^2 x N cell/particle sums run without
/// re-evaluating exp.
struct KernelFactors {
    std::vector<double> gx;  // [ix * N + i]
    std::vector<double> gy;  // [iy * N + i]
    std::size_t n = 0;
    int resolution = 0;
};

inline KernelFactors kernel_factors(std::span<const Point2> pts, const GridSpec& grid,
                                    const KernelConfig& kernel) {
    const int r = grid.resolution;
    const std::size_t n = pts.size();
    KernelFactors f;
    f.n = n;
    f.resolution = r;
    f.gx.resize(static_cast<std::size_t>(r) * n);
    f.gy.resize(static_cast<std::size_t>(r) * n);
    const double inv2s2 = 1.0 / (2.0 * kernel.sigma * kernel.sigma);
    parallel_for(static_cast<std::size_t>(r), [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const double cx = grid.center_x(static_cast<int>(c));
            const double cy = grid.center_y(static_cast<int>(c));
            double* gx = f.gx.data() + c * n;
            double* gy = f.gy.data() + c * n;
            for (std::size_t i = 0; i < n; ++i) {
                const double dx = cx - pts[i].x;
                const double dy = cy - pts[i].y;
                gx[i] = std::exp(-dx * dx * inv2s2);
                gy[i] = std::exp(-dy * dy * inv2s2);
            }
        }
    });
    return f;
}

/// Unnormalized cell masses u[iy * R + ix] = (1/N) sum_i gy[iy,i] gx[ix,i].
inline std::vector<double> cell_masses(const KernelFactors& f) {
    const int r = f.resolution;
    const std::size_t n = f.n;
    std::vector<double> u(static_cast<std::size_t>(r) * r);
    const double invn = 1.0 / static_cast<double>(n);
    parallel_for(static_cast<std::size_t>(r), [&](std::size_t begin, std::size_t end) {
        for (std::size_t iy = begin; iy < end; ++iy) {
            const double* gy = f.gy.data() + iy * n;
            for (int ix = 0; ix < r; ++ix) {
                const double* gx = f.gx.data() + static_cast<std::size_t>(ix) * n;
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += gy[i] * gx[i];
                u[iy * static_cast<std::size_t>(r) + static_cast<std::size_t>(ix)] = s * invn;
            }
        }
    });
    return u;
}

}  // namespace detail

/// Gaussian kernel density of the particle cloud evaluated at every cell
/// center, normalized to a distribution over the R^2 cells.
inline DiscreteDistribution kde_on_grid(const ParticleSet& particles, const GridSpec& grid,
                                        const KernelConfig& kernel) {
    grid.validate();
    kernel.validate();
    const auto factors = detail::kernel_factors(particles.points(), grid, kernel);
    return DiscreteDistribution::from_masses(detail::cell_masses(factors));
}

}  // namespace qif::flow
