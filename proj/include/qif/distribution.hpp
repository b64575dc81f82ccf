#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qif {

/// Numerical floor applied to fidelities and log/division arguments so the
/// divergences stay finite on disjoint supports.
class ClampPolicy {
public:
    static constexpr double kDefaultEpsilon = 1e-13;

    ClampPolicy() = default;

    explicit ClampPolicy(double epsilon) : epsilon_(epsilon) {
        if (!(epsilon > 0.0) || !(epsilon < 1e-6)) {
            throw std::invalid_argument("ClampPolicy: epsilon must lie in (0, 1e-6), got " +
                                        std::to_string(epsilon));
        }
    }

    double epsilon() const noexcept { return epsilon_; }

private:
    double epsilon_ = kDefaultEpsilon;
};

/// Probability mass function over d outcomes. Weights are nonnegative and
/// normalized to sum to one at construction; inputs whose sum drifts outside
/// [1 - 1e-6, 1 + 1e-6] are rejected as malformed rather than silently fixed.
class DiscreteDistribution {
public:
    static constexpr double kSumTolerance = 1e-6;

    explicit DiscreteDistribution(std::vector<double> weights)
        : weights_(std::move(weights)) {
        const double total = validate_nonnegative_finite(weights_);
        if (std::abs(total - 1.0) > kSumTolerance) {
            throw std::invalid_argument("DiscreteDistribution: weights sum to " +
                                        std::to_string(total) + ", expected 1 within 1e-6");
        }
        normalize(total);
    }

    /// Builds a distribution from arbitrary nonnegative masses (e.g. kernel
    /// density cell masses) by scaling them to total mass one.
    static DiscreteDistribution from_masses(std::vector<double> masses) {
        const double total = validate_nonnegative_finite(masses);
        if (!(total > 0.0)) {
            throw std::invalid_argument("DiscreteDistribution: total mass must be positive");
        }
        return DiscreteDistribution(NormalizedTag{}, std::move(masses), total);
    }

    std::size_t size() const noexcept { return weights_.size(); }
    std::span<const double> weights() const noexcept { return weights_; }
    double operator[](std::size_t i) const noexcept { return weights_[i]; }

    bool operator==(const DiscreteDistribution& other) const noexcept {
        return weights_ == other.weights_;
    }

private:
    struct NormalizedTag {};

    DiscreteDistribution(NormalizedTag, std::vector<double> masses, double total)
        : weights_(std::move(masses)) {
        normalize(total);
    }

    static double validate_nonnegative_finite(const std::vector<double>& w) {
        if (w.empty()) {
            throw std::invalid_argument("DiscreteDistribution: need at least one outcome");
        }
        double total = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!std::isfinite(w[i]) || w[i] < 0.0) {
                throw std::invalid_argument("DiscreteDistribution: weight " + std::to_string(i) +
                                            " is negative or non-finite");
            }
            total += w[i];
        }
        return total;
    }

    void normalize(double total) {
        if (total != 1.0) {
            const double inv = 1.0 / total;
            for (double& w : weights_) w *= inv;
        }
    }

    std::vector<double> weights_;
};

}  // namespace qif
