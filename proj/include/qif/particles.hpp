#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qif::flow {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    bool operator==(const Point2&) const = default;
};

inline double squared_distance(Point2 a, Point2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Cloud of 2-D sample points. Nonempty with finite coordinates.
class ParticleSet {
public:
    explicit ParticleSet(std::vector<Point2> points) : points_(std::move(points)) {
        if (points_.empty()) {
            throw std::invalid_argument("ParticleSet: need at least one point");
        }
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
                throw std::invalid_argument("ParticleSet: point " + std::to_string(i) +
                                            " is non-finite");
            }
        }
    }

    std::size_t size() const noexcept { return points_.size(); }
    std::span<const Point2> points() const noexcept { return points_; }
    const Point2& operator[](std::size_t i) const noexcept { return points_[i]; }

    bool operator==(const ParticleSet& other) const noexcept { return points_ == other.points_; }

private:
    std::vector<Point2> points_;
};

}  // namespace qif::flow
