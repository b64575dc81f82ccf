#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "qif/distribution.hpp"

namespace qif {

namespace detail {

inline void require_same_dimension(const DiscreteDistribution& p, const DiscreteDistribution& q,
                                   const char* op) {
    if (p.size() != q.size()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(p.size()) + " vs " + std::to_string(q.size()) +
                                    ")");
    }
}

}  // namespace detail

/// Squared overlap (sum_i sqrt(p_i) sqrt(q_i))^2 between two distributions.
/// Equals the quantum fidelity of the amplitude-encoded pure states; lies in
/// [0, 1] with 1 exactly when the inputs are identical. The return value is
/// clamped to [0, 1] to absorb summation rounding.
inline double fidelity(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    detail::require_same_dimension(p, q, "fidelity");
    if (p == q) return 1.0;
    double overlap = 0.0;
    const auto pw = p.weights();
    const auto qw = q.weights();
    for (std::size_t i = 0; i < pw.size(); ++i) {
        overlap += std::sqrt(pw[i]) * std::sqrt(qw[i]);
    }
    return std::clamp(overlap * overlap, 0.0, 1.0);
}

/// Fidelity-based divergence -F log F with F floored at clamp.epsilon().
/// Bounded in [0, 1/e]; zero exactly when F reaches 1.
inline double qif_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q,
                             const ClampPolicy& clamp = {}) {
    detail::require_same_dimension(p, q, "qif_divergence");
    const double f = std::max(fidelity(p, q), clamp.epsilon());
    if (f == 1.0) return 0.0;
    return -f * std::log(f);
}

/// Kullback-Leibler divergence sum_i p_i log(p_i / q_i). Terms with p_i = 0
/// contribute zero; q_i is floored at clamp.epsilon() so disjoint supports
/// give a large finite value instead of infinity.
inline double kl_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q,
                            const ClampPolicy& clamp = {}) {
    detail::require_same_dimension(p, q, "kl_divergence");
    const double eps = clamp.epsilon();
    double sum = 0.0;
    const auto pw = p.weights();
    const auto qw = q.weights();
    for (std::size_t i = 0; i < pw.size(); ++i) {
        if (pw[i] > 0.0) {
            sum += pw[i] * std::log(pw[i] / std::max(qw[i], eps));
        }
    }
    return sum;
}

/// Jensen-Shannon divergence 0.5 KL(p||m) + 0.5 KL(q||m) with m the midpoint
/// mixture. Symmetric and bounded by log 2.
inline double js_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q,
                            const ClampPolicy& clamp = {}) {
    detail::require_same_dimension(p, q, "js_divergence");
    const double eps = clamp.epsilon();
    double sum = 0.0;
    const auto pw = p.weights();
    const auto qw = q.weights();
    for (std::size_t i = 0; i < pw.size(); ++i) {
        const double m = std::max(0.5 * (pw[i] + qw[i]), eps);
        if (pw[i] > 0.0) sum += 0.5 * pw[i] * std::log(pw[i] / m);
        if (qw[i] > 0.0) sum += 0.5 * qw[i] * std::log(qw[i] / m);
    }
    return sum;
}

/// Bhattacharyya distance -ln(sum_i sqrt(p_i q_i)); the coefficient is
/// floored at clamp.epsilon() so disjoint supports stay finite.
inline double bhattacharyya_distance(const DiscreteDistribution& p, const DiscreteDistribution& q,
                                     const ClampPolicy& clamp = {}) {
    detail::require_same_dimension(p, q, "bhattacharyya_distance");
    if (p == q) return 0.0;
    double coeff = 0.0;
    const auto pw = p.weights();
    const auto qw = q.weights();
    for (std::size_t i = 0; i < pw.size(); ++i) {
        coeff += std::sqrt(pw[i] * qw[i]);
    }
    return -std::log(std::max(coeff, clamp.epsilon()));
}

/// G(f) = f log f. Zero at f = 1, negative on (0, 1) with global minimum
/// -1/e at f = 1/e, positive and unbounded for f > 1.
inline double g_transform(double f) {
    if (!(f > 0.0)) {
        throw std::invalid_argument("g_transform: argument must be positive, got " +
                                    std::to_string(f));
    }
    return f * std::log(f);
}

/// Derivative of G: log(f) + 1. Acts as the gradient scaling factor when a
/// divergence value is passed through G.
inline double g_gradient_factor(double f) {
    if (!(f > 0.0)) {
        throw std::invalid_argument("g_gradient_factor: argument must be positive, got " +
                                    std::to_string(f));
    }
    return std::log(f) + 1.0;
}

/// Linear fidelity loss 1 - f for f in [0, 1].
inline double simple_fidelity_loss(double f) {
    if (!(f >= 0.0) || !(f <= 1.0)) {
        throw std::invalid_argument("simple_fidelity_loss: argument must lie in [0, 1], got " +
                                    std::to_string(f));
    }
    return 1.0 - f;
}

}  // namespace qif
