#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qif/distribution.hpp"

namespace qif {

/// Amplitude vectors (square roots of probabilities) for the density-matrix
/// fidelity oracle. Verification-only, hence the small dimension cap.
class PureStateOracleInput {
public:
    static constexpr std::size_t kMaxDimension = 16;

    PureStateOracleInput(std::vector<double> amplitudes_p, std::vector<double> amplitudes_q)
        : p_(std::move(amplitudes_p)), q_(std::move(amplitudes_q)) {
        if (p_.size() != q_.size()) {
            throw std::invalid_argument("PureStateOracleInput: dimension mismatch (" +
                                        std::to_string(p_.size()) + " vs " +
                                        std::to_string(q_.size()) + ")");
        }
        if (p_.empty() || p_.size() > kMaxDimension) {
            throw std::invalid_argument("PureStateOracleInput: dimension must lie in [1, 16], got " +
                                        std::to_string(p_.size()));
        }
        check_unit_norm(p_, "amplitudes_p");
        check_unit_norm(q_, "amplitudes_q");
    }

    static PureStateOracleInput from_distributions(const DiscreteDistribution& p,
                                                   const DiscreteDistribution& q) {
        std::vector<double> ap(p.size()), aq(q.size());
        for (std::size_t i = 0; i < p.size(); ++i) ap[i] = std::sqrt(p[i]);
        for (std::size_t i = 0; i < q.size(); ++i) aq[i] = std::sqrt(q[i]);
        return PureStateOracleInput(std::move(ap), std::move(aq));
    }

    std::span<const double> amplitudes_p() const noexcept { return p_; }
    std::span<const double> amplitudes_q() const noexcept { return q_; }
    std::size_t dimension() const noexcept { return p_.size(); }

private:
    static void check_unit_norm(const std::vector<double>& a, const char* name) {
        double norm2 = 0.0;
        for (double v : a) {
            if (!std::isfinite(v) || v < 0.0) {
                throw std::invalid_argument(std::string("PureStateOracleInput: ") + name +
                                            " has a negative or non-finite amplitude");
            }
            norm2 += v * v;
        }
        if (std::abs(norm2 - 1.0) > 1e-9) {
            throw std::invalid_argument(std::string("PureStateOracleInput: ") + name +
                                        " squared amplitudes sum to " + std::to_string(norm2) +
                                        ", expected 1 within 1e-9");
        }
    }

    std::vector<double> p_;
    std::vector<double> q_;
};

namespace detail {

inline Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("fidelity_oracle: eigendecomposition failed");
    }
    Eigen::VectorXd roots = es.eigenvalues();
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        roots[i] = std::sqrt(std::max(roots[i], 0.0));
    }
    return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 evaluated on the
/// rank-1 density matrices built from the amplitude vectors. This takes the
/// full matrix route on purpose: it is the independent check that the O(n)
/// overlap formula reproduces the density-matrix definition.
inline double fidelity_oracle(const PureStateOracleInput& input) {
    const auto d = static_cast<Eigen::Index>(input.dimension());
    Eigen::VectorXd ap(d), aq(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        ap[i] = input.amplitudes_p()[static_cast<std::size_t>(i)];
        aq[i] = input.amplitudes_q()[static_cast<std::size_t>(i)];
    }
    const Eigen::MatrixXd rho = ap * ap.transpose();
    const Eigen::MatrixXd sigma = aq * aq.transpose();

    const Eigen::MatrixXd sqrt_rho = detail::matrix_sqrt_psd(rho);
    const Eigen::MatrixXd inner = sqrt_rho * sigma * sqrt_rho;
    // inner is PSD up to rounding; symmetrize before the second root
    const Eigen::MatrixXd sym = 0.5 * (inner + inner.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("fidelity_oracle: eigendecomposition failed");
    }
    double trace = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        trace += std::sqrt(std::max(es.eigenvalues()[i], 0.0));
    }
    return std::clamp(trace * trace, 0.0, 1.0);
}

}  // namespace qif
