#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qif/distribution.hpp"
#include "qif/error.hpp"
#include "qif/grid.hpp"
#include "qif/kde.hpp"
#include "qif/parallel.hpp"
#include "qif/particles.hpp"
#include "qif/sinkhorn.hpp"

namespace qif::flow {

enum class FlowDivergence { kl, js, qif, kl_flogf, js_flogf, one_minus_f, mmd };

struct FlowConfig {
    FlowDivergence divergence = FlowDivergence::qif;
    double learning_rate = 0.01;
    int iterations = 3000;
    GridSpec grid{};
    KernelConfig kernel{};
    std::uint64_t seed = 0;
    int snapshot_every = 500;
    SinkhornParams sinkhorn{};
    ClampPolicy clamp{};

    void validate() const {
        if (!(learning_rate > 0.0)) {
            throw std::invalid_argument("FlowConfig: learning_rate must be positive");
        }
        if (iterations < 1) throw std::invalid_argument("FlowConfig: iterations must be positive");
        if (snapshot_every < 1) {
            throw std::invalid_argument("FlowConfig: snapshot_every must be positive");
        }
        grid.validate();
        kernel.validate();
        sinkhorn.validate();
    }
};

/// Target of a flow run: the sample cloud plus its grid density, fixed once.
/// The grid density drives every grid-based divergence; mmd compares against
/// the raw samples and additionally caches its sample self-interaction term.
struct FlowTarget {
    ParticleSet samples;
    DiscreteDistribution grid_density;
    double mmd_self_term = 0.0;

    static FlowTarget make(const ParticleSet& samples, const FlowConfig& cfg) {
        cfg.validate();
        FlowTarget t{samples, kde_on_grid(samples, cfg.grid, cfg.kernel), 0.0};
        const std::size_t m = samples.size();
        const double inv2s2 = 1.0 / (2.0 * cfg.kernel.sigma * cfg.kernel.sigma);
        std::vector<double> row(m, 0.0);
        parallel_for(m, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    s += std::exp(-squared_distance(samples[i], samples[j]) * inv2s2);
                }
                row[i] = s;
            }
        });
        double total = 0.0;
        for (double v : row) total += v;
        t.mmd_self_term = total / (static_cast<double>(m) * static_cast<double>(m));
        return t;
    }
};

struct MetricRow {
    int iteration = 0;
    double objective = 0.0;
    double sinkhorn = 0.0;
    double wall_ms = 0.0;
};

struct MetricTrace {
    std::vector<MetricRow> rows;
};

struct Snapshot {
    int iteration = 0;
    ParticleSet particles;
};

struct FlowResult {
    ParticleSet particles;
    MetricTrace trace;
    std::vector<Snapshot> snapshots;
    bool diverged = false;
    int iterations_completed = 0;
};

namespace detail {

struct GridPartials {
    double value = 0.0;
    std::vector<double> dvalue_dp;  // empty unless requested
};

/// Objective value and (optionally) its partials with respect to the
/// normalized cell masses p, with the target cell masses q held fixed.
inline GridPartials grid_partials(std::span<const double> p, std::span<const double> q,
                                  FlowDivergence kind, double eps, bool want_partials) {
    GridPartials out;
    const std::size_t d = p.size();
    if (want_partials) out.dvalue_dp.assign(d, 0.0);

    const bool flogf = kind == FlowDivergence::kl_flogf || kind == FlowDivergence::js_flogf;
    const FlowDivergence base =
        kind == FlowDivergence::kl_flogf ? FlowDivergence::kl
        : kind == FlowDivergence::js_flogf ? FlowDivergence::js
                                           : kind;

    double value = 0.0;
    switch (base) {
        case FlowDivergence::kl: {
            for (std::size_t c = 0; c < d; ++c) {
                const double qc = std::max(q[c], eps);
                if (p[c] > 0.0) value += p[c] * std::log(p[c] / qc);
                if (want_partials) {
                    out.dvalue_dp[c] = std::log(std::max(p[c], eps) / qc) + 1.0;
                }
            }
            break;
        }
        case FlowDivergence::js: {
            for (std::size_t c = 0; c < d; ++c) {
                const double m = std::max(0.5 * (p[c] + q[c]), eps);
                if (p[c] > 0.0) value += 0.5 * p[c] * std::log(p[c] / m);
                if (q[c] > 0.0) value += 0.5 * q[c] * std::log(q[c] / m);
                if (want_partials) {
                    out.dvalue_dp[c] = 0.5 * std::log(std::max(p[c], eps) / m);
                }
            }
            break;
        }
        case FlowDivergence::qif:
        case FlowDivergence::one_minus_f: {
            double overlap = 0.0;
            for (std::size_t c = 0; c < d; ++c) overlap += std::sqrt(p[c]) * std::sqrt(q[c]);
            const double fid = std::clamp(overlap * overlap, 0.0, 1.0);
            if (base == FlowDivergence::qif) {
                const double ft = std::max(fid, eps);
                value = ft == 1.0 ? 0.0 : -ft * std::log(ft);
                if (want_partials) {
                    const double factor = -(std::log(ft) + 1.0) * overlap;
                    for (std::size_t c = 0; c < d; ++c) {
                        out.dvalue_dp[c] = factor * std::sqrt(q[c]) / std::sqrt(std::max(p[c], eps));
                    }
                }
            } else {
                value = 1.0 - fid;
                if (want_partials) {
                    for (std::size_t c = 0; c < d; ++c) {
                        out.dvalue_dp[c] =
                            -overlap * std::sqrt(q[c]) / std::sqrt(std::max(p[c], eps));
                    }
                }
            }
            break;
        }
        default:
            throw std::logic_error("grid_partials: mmd is not a grid divergence");
    }

    if (flogf) {
        // G(D + eps) keeps the transform defined at D = 0; the scaling factor
        // log(D + eps) + 1 is the exact derivative of that shifted transform.
        const double shifted = value + eps;
        out.value = shifted * std::log(shifted);
        if (want_partials) {
            const double factor = std::log(shifted) + 1.0;
            for (double& v : out.dvalue_dp) v *= factor;
        }
    } else {
        out.value = value;
    }
    return out;
}

struct FlowEval {
    double objective = 0.0;
    std::vector<Point2> velocity;
};

inline FlowEval evaluate_mmd(std::span<const Point2> pts, const FlowTarget& target,
                             const FlowConfig& cfg, bool want_velocity) {
    const std::size_t n = pts.size();
    const auto tgt = target.samples.points();
    const std::size_t m = tgt.size();
    const double sigma2 = cfg.kernel.sigma * cfg.kernel.sigma;
    const double inv2s2 = 1.0 / (2.0 * sigma2);

    FlowEval eval;
    std::vector<double> row_xx(n, 0.0), row_xy(n, 0.0);
    if (want_velocity) eval.velocity.assign(n, Point2{});
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double sxx = 0.0, sxy = 0.0;
            double vx = 0.0, vy = 0.0;
            for (std::size_t b = 0; b < n; ++b) {
                const double k = std::exp(-squared_distance(pts[i], pts[b]) * inv2s2);
                sxx += k;
                if (want_velocity) {
                    vx += k * (pts[b].x - pts[i].x);
                    vy += k * (pts[b].y - pts[i].y);
                }
            }
            if (want_velocity) {
                vx *= 2.0 / static_cast<double>(n);
                vy *= 2.0 / static_cast<double>(n);
            }
            double wx = 0.0, wy = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double k = std::exp(-squared_distance(pts[i], tgt[j]) * inv2s2);
                sxy += k;
                if (want_velocity) {
                    wx += k * (tgt[j].x - pts[i].x);
                    wy += k * (tgt[j].y - pts[i].y);
                }
            }
            row_xx[i] = sxx;
            row_xy[i] = sxy;
            if (want_velocity) {
                wx *= 2.0 / static_cast<double>(m);
                wy *= 2.0 / static_cast<double>(m);
                eval.velocity[i] = {(vx - wx) / sigma2, (vy - wy) / sigma2};
            }
        }
    });
    double t_xx = 0.0, t_xy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t_xx += row_xx[i];
        t_xy += row_xy[i];
    }
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    eval.objective = t_xx / (nn * nn) - 2.0 * t_xy / (nn * mm) + target.mmd_self_term;
    return eval;
}

/// Objective value and per-particle velocity. The velocity is the gradient of
/// the mean-field objective N * D: each particle carries mass 1/N, so the raw
/// parameter gradient shrinks as 1/N while N times it is the discretized
/// Wasserstein velocity field, independent of the cloud size.
inline FlowEval evaluate(std::span<const Point2> pts, const FlowTarget& target,
                         const FlowConfig& cfg, bool want_velocity) {
    if (cfg.divergence == FlowDivergence::mmd) {
        return evaluate_mmd(pts, target, cfg, want_velocity);
    }
    if (target.grid_density.size() != cfg.grid.cells()) {
        throw std::invalid_argument("flow: target grid distribution has dimension " +
                                    std::to_string(target.grid_density.size()) + ", expected " +
                                    std::to_string(cfg.grid.cells()));
    }

    const std::size_t n = pts.size();
    const int r = cfg.grid.resolution;
    const std::size_t cells = cfg.grid.cells();
    const auto factors = kernel_factors(pts, cfg.grid, cfg.kernel);
    const std::vector<double> u = cell_masses(factors);
    double mass_total = 0.0;
    for (double v : u) mass_total += v;

    FlowEval eval;
    if (!(mass_total > 0.0) || !std::isfinite(mass_total)) {
        eval.objective = std::numeric_limits<double>::quiet_NaN();
        return eval;
    }

    std::vector<double> p(cells);
    for (std::size_t c = 0; c < cells; ++c) p[c] = u[c] / mass_total;

    const auto q = target.grid_density.weights();
    const auto partials =
        grid_partials(p, q, cfg.divergence, cfg.clamp.epsilon(), want_velocity);
    eval.objective = partials.value;
    if (!want_velocity) return eval;

    // w[c] folds the normalization chain: dD/du_c = (a_c - a.p) / mass_total.
    double a_dot_p = 0.0;
    for (std::size_t c = 0; c < cells; ++c) a_dot_p += partials.dvalue_dp[c] * p[c];
    std::vector<double> w(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        w[c] = (partials.dvalue_dp[c] - a_dot_p) / mass_total;
    }

    const double inv_sigma2 = 1.0 / (cfg.kernel.sigma * cfg.kernel.sigma);
    eval.velocity.assign(n, Point2{});
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        std::vector<double> gxi(static_cast<std::size_t>(r));
        std::vector<double> gyi(static_cast<std::size_t>(r));
        for (std::size_t i = begin; i < end; ++i) {
            for (int c = 0; c < r; ++c) {
                gxi[static_cast<std::size_t>(c)] = factors.gx[static_cast<std::size_t>(c) * n + i];
                gyi[static_cast<std::size_t>(c)] = factors.gy[static_cast<std::size_t>(c) * n + i];
            }
            double vx = 0.0, vy = 0.0;
            for (int iy = 0; iy < r; ++iy) {
                const double* wrow = w.data() + static_cast<std::size_t>(iy) * r;
                double t1 = 0.0, t2 = 0.0;
                for (int ix = 0; ix < r; ++ix) {
                    const double wg = wrow[ix] * gxi[static_cast<std::size_t>(ix)];
                    t1 += wg;
                    t2 += wg * cfg.grid.center_x(ix);
                }
                const double gy = gyi[static_cast<std::size_t>(iy)];
                vx += gy * (t2 - pts[i].x * t1);
                vy += gy * (cfg.grid.center_y(iy) - pts[i].y) * t1;
            }
            eval.velocity[i] = {vx * inv_sigma2, vy * inv_sigma2};
        }
    });
    return eval;
}

}  // namespace detail

/// Value of the configured flow objective (the divergence between the
/// particle KDE and the target; mmd compares raw samples). This is the
/// quantity recorded in the metric trace; the descent objective that
/// flow_gradient differentiates is N times it.
inline double flow_divergence(const ParticleSet& particles, const FlowTarget& target,
                              const FlowConfig& cfg) {
    cfg.validate();
    return detail::evaluate(particles.points(), target, cfg, false).objective;
}

/// Per-particle gradient of the mean-field objective N * flow_divergence.
/// Throws NumericalError naming the first particle whose gradient is
/// non-finite.
inline std::vector<Point2> flow_gradient(const ParticleSet& particles, const FlowTarget& target,
                                         const FlowConfig& cfg) {
    cfg.validate();
    auto eval = detail::evaluate(particles.points(), target, cfg, true);
    if (eval.velocity.empty()) {
        throw NumericalError("flow_gradient: objective is non-finite");
    }
    for (std::size_t i = 0; i < eval.velocity.size(); ++i) {
        if (!std::isfinite(eval.velocity[i].x) || !std::isfinite(eval.velocity[i].y)) {
            throw NumericalError("flow_gradient: non-finite gradient for particle " +
                                 std::to_string(i));
        }
    }
    return std::move(eval.velocity);
}

/// Plain gradient descent of the particle cloud against the fixed target.
/// Records the objective and the Sinkhorn distance to the target samples at
/// iteration 0, every snapshot_every iterations, and at the end. A non-finite
/// evaluation aborts the run; the trace and snapshots up to the failure are
/// preserved and diverged is set.
inline FlowResult run_flow(const ParticleSet& init, const ParticleSet& target_samples,
                           const FlowConfig& cfg) {
    cfg.validate();
    const FlowTarget target = FlowTarget::make(target_samples, cfg);
    std::vector<Point2> pts(init.points().begin(), init.points().end());

    MetricTrace trace;
    std::vector<Snapshot> snapshots;
    const auto start = std::chrono::steady_clock::now();
    const auto record = [&](int iteration) {
        const double objective = detail::evaluate(pts, target, cfg, false).objective;
        const double sk = sinkhorn_distance(ParticleSet(pts), target_samples, cfg.sinkhorn);
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        trace.rows.push_back({iteration, objective, sk, wall_ms});
        snapshots.push_back({iteration, ParticleSet(pts)});
    };

    record(0);
    bool diverged = false;
    int completed = 0;
    std::vector<Point2> last_good = pts;
    for (int t = 1; t <= cfg.iterations; ++t) {
        const auto eval = detail::evaluate(pts, target, cfg, true);
        bool finite = std::isfinite(eval.objective) && !eval.velocity.empty();
        for (std::size_t i = 0; finite && i < eval.velocity.size(); ++i) {
            finite = std::isfinite(eval.velocity[i].x) && std::isfinite(eval.velocity[i].y);
        }
        if (!finite) {
            diverged = true;
            pts = last_good;
            break;
        }
        last_good = pts;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            pts[i].x -= cfg.learning_rate * eval.velocity[i].x;
            pts[i].y -= cfg.learning_rate * eval.velocity[i].y;
        }
        completed = t;
        if (t % cfg.snapshot_every == 0 || t == cfg.iterations) record(t);
    }

    return FlowResult{ParticleSet(std::move(pts)), std::move(trace), std::move(snapshots),
                      diverged, completed};
}

}  // namespace qif::flow
