#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qif/error.hpp"
#include "qif/parallel.hpp"
#include "qif/particles.hpp"

namespace qif::flow {

struct SinkhornParams {
    double reg = 0.05;
    int max_iter = 500;
    double tol = 1e-9;

    void validate() const {
        if (!(reg > 0.0)) throw std::invalid_argument("SinkhornParams: reg must be positive");
        if (max_iter < 1) throw std::invalid_argument("SinkhornParams: max_iter must be positive");
        if (!(tol > 0.0)) throw std::invalid_argument("SinkhornParams: tol must be positive");
    }
};

namespace detail {

inline double logsumexp_row(const double* vals, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, vals[i]);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::exp(vals[i] - m);
    return m + std::log(s);
}

}  // namespace detail

/// Entropic-regularized transport cost <plan, C> between two uniform point
/// clouds under squared Euclidean cost, computed with log-domain scaling
/// iterations. Stops once the L1 marginal violation drops below tol or
/// max_iter update rounds have run.
inline double sinkhorn_distance(const ParticleSet& a, const ParticleSet& b, double reg,
                                int max_iter = 500, double tol = 1e-9) {
    SinkhornParams{reg, max_iter, tol}.validate();
    const std::size_t n = a.size();
    const std::size_t m = b.size();

    std::vector<double> cost(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            cost[i * m + j] = squared_distance(a[i], b[j]);
        }
    }

    const double log_a = -std::log(static_cast<double>(n));
    const double log_b = -std::log(static_cast<double>(m));
    std::vector<double> f(n, 0.0), g(m, 0.0), f_next(n, 0.0);
    const double inv_reg = 1.0 / reg;

    for (int it = 0; it < max_iter; ++it) {
        // f_next makes row marginals exact given g; comparing it against the
        // current f also yields the row sums of the current plan for free.
        parallel_for(n, [&](std::size_t begin, std::size_t end) {
            std::vector<double> row(m);
            for (std::size_t i = begin; i < end; ++i) {
                const double* c = cost.data() + i * m;
                for (std::size_t j = 0; j < m; ++j) row[j] = (g[j] - c[j]) * inv_reg + log_b;
                f_next[i] = -reg * detail::logsumexp_row(row.data(), m);
            }
        });
        if (it > 0) {
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                err += std::abs(std::exp((f[i] - f_next[i]) * inv_reg + log_a) -
                                std::exp(log_a));
            }
            if (err < tol) break;
        }
        std::swap(f, f_next);
        parallel_for(m, [&](std::size_t begin, std::size_t end) {
            std::vector<double> col(n);
            for (std::size_t j = begin; j < end; ++j) {
                for (std::size_t i = 0; i < n; ++i) col[i] = (f[i] - cost[i * m + j]) * inv_reg + log_a;
                g[j] = -reg * detail::logsumexp_row(col.data(), n);
            }
        });
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(f[i])) {
                throw NumericalError("sinkhorn_distance: scaling vector became non-finite; "
                                     "try a larger reg");
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (!std::isfinite(g[j])) {
                throw NumericalError("sinkhorn_distance: scaling vector became non-finite; "
                                     "try a larger reg");
            }
        }
    }

    std::vector<double> row_cost(n, 0.0);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double* c = cost.data() + i * m;
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                s += std::exp((f[i] + g[j] - c[j]) * inv_reg + log_a + log_b) * c[j];
            }
            row_cost[i] = s;
        }
    });
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += row_cost[i];
    return std::max(total, 0.0);
}

inline double sinkhorn_distance(const ParticleSet& a, const ParticleSet& b,
                                const SinkhornParams& params) {
    return sinkhorn_distance(a, b, params.reg, params.max_iter, params.tol);
}

}  // namespace qif::flow
