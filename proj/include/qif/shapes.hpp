#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qif/particles.hpp"
#include "qif/rng.hpp"

namespace qif::flow {

enum class TargetShape { heart, ring, gaussian };
enum class InitShape { star, gaussian, uniform };

namespace detail {

inline Point2 heart_curve_raw(double t) {
    const double s = std::sin(t);
    return {16.0 * s * s * s,
            13.0 * std::cos(t) - 5.0 * std::cos(2.0 * t) - 2.0 * std::cos(3.0 * t) -
                std::cos(4.0 * t)};
}

struct HeartBounds {
    double xmin, xmax, ymin, ymax;
};

inline const HeartBounds& heart_bounds() {
    static const HeartBounds b = [] {
        HeartBounds r{1e300, -1e300, 1e300, -1e300};
        constexpr int kSamples = 8192;
        for (int i = 0; i < kSamples; ++i) {
            const Point2 p = heart_curve_raw(2.0 * std::numbers::pi * i / kSamples);
            r.xmin = std::min(r.xmin, p.x);
            r.xmax = std::max(r.xmax, p.x);
            r.ymin = std::min(r.ymin, p.y);
            r.ymax = std::max(r.ymax, p.y);
        }
        return r;
    }();
    return b;
}

/// Heart curve point with the bounding box mapped onto [-1, 1]^2.
inline Point2 heart_curve(double t) {
    const auto& b = heart_bounds();
    const Point2 p = heart_curve_raw(t);
    return {2.0 * (p.x - b.xmin) / (b.xmax - b.xmin) - 1.0,
            2.0 * (p.y - b.ymin) / (b.ymax - b.ymin) - 1.0};
}

/// Closed pentagram outline: 10 vertices alternating between circumradius 1
/// and the classic inner radius, first vertex pointing up. Centered at the
/// origin so the sampled outline keeps a zero centroid, and already inside
/// [-1, 1]^2.
inline const std::array<Point2, 11>& star_outline() {
    static const std::array<Point2, 11> verts = [] {
        std::array<Point2, 11> v{};
        const double inner =
            std::sin(std::numbers::pi / 10.0) / std::sin(7.0 * std::numbers::pi / 10.0);
        for (int k = 0; k < 10; ++k) {
            const double ang = std::numbers::pi / 2.0 + k * std::numbers::pi / 5.0;
            const double r = (k % 2 == 0) ? 1.0 : inner;
            v[static_cast<std::size_t>(k)] = {r * std::cos(ang), r * std::sin(ang)};
        }
        v[10] = v[0];
        return v;
    }();
    return verts;
}

inline Point2 star_at_arc_length(double s) {
    const auto& v = star_outline();
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const Point2 seg = v[k + 1] - v[k];
        const double len = std::hypot(seg.x, seg.y);
        if (s <= len || k + 2 == v.size()) {
            const double frac = std::clamp(s / len, 0.0, 1.0);
            return v[k] + frac * seg;
        }
        s -= len;
    }
    return v[0];
}

inline double star_perimeter() {
    const auto& v = star_outline();
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const Point2 seg = v[k + 1] - v[k];
        total += std::hypot(seg.x, seg.y);
    }
    return total;
}

inline void require_shape_args(std::size_t n, double noise) {
    if (n < 1) throw std::invalid_argument("shape sampler: n must be at least 1");
    if (!(noise >= 0.0)) throw std::invalid_argument("shape sampler: noise must be nonnegative");
}

}  // namespace detail

/// Samples the target cloud. Shapes are deterministic in the seed; noise is
/// additive isotropic Gaussian with the given scale.
inline ParticleSet make_target(TargetShape shape, std::size_t n, double noise,
                               std::uint64_t seed) {
    detail::require_shape_args(n, noise);
    StreamRng rng(seed);
    std::vector<Point2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point2 p;
        switch (shape) {
            case TargetShape::heart:
                p = detail::heart_curve(rng.uniform(0.0, 2.0 * std::numbers::pi));
                break;
            case TargetShape::ring: {
                const double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
                p = {0.8 * std::cos(ang), 0.8 * std::sin(ang)};
                break;
            }
            case TargetShape::gaussian:
                p = {std::clamp(0.25 * rng.normal(), -1.0, 1.0),
                     std::clamp(0.25 * rng.normal(), -1.0, 1.0)};
                break;
        }
        if (noise > 0.0) {
            p.x += noise * rng.normal();
            p.y += noise * rng.normal();
        }
        pts.push_back(p);
    }
    return ParticleSet(std::move(pts));
}

/// Samples the initial cloud; the star outline is drawn uniformly by arc
/// length.
inline ParticleSet make_init(InitShape shape, std::size_t n, double noise, std::uint64_t seed) {
    detail::require_shape_args(n, noise);
    StreamRng rng(seed);
    const double perimeter = detail::star_perimeter();
    std::vector<Point2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point2 p;
        switch (shape) {
            case InitShape::star:
                p = detail::star_at_arc_length(rng.uniform(0.0, perimeter));
                break;
            case InitShape::gaussian:
                p = {std::clamp(0.25 * rng.normal(), -1.0, 1.0),
                     std::clamp(0.25 * rng.normal(), -1.0, 1.0)};
                break;
            case InitShape::uniform:
                p = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
                break;
        }
        if (noise > 0.0) {
            p.x += noise * rng.normal();
            p.y += noise * rng.normal();
        }
        pts.push_back(p);
    }
    return ParticleSet(std::move(pts));
}

}  // namespace qif::flow
