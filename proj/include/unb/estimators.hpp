#pragma once

#include <vector>

#include "unb/bandit.hpp"
#include "unb/math.hpp"

namespace unb {

/// Floor applied to plug-in variances to guard early-round degeneracy.
inline constexpr double kVarianceFloor = 1e-12;

/// Plug-in moment estimators built from the streaming sums. Cross moments of
/// a pair that was never co-selected are flagged unavailable and their
/// covariance is reported as zero.
struct MomentEstimates {
    std::vector<double> mean;           // mu_hat = A/W
    std::vector<double> second_moment;  // q_hat = B/W
    std::vector<double> variance;       // sigma2_hat = q_hat - mu_hat^2, floored
    std::vector<bool> variance_clamped;
    Matrix cross_moment;      // q_hat_ks = C/U
    Matrix cross_cov;         // C_hat_ks
    Matrix cross_corr;        // rho_hat_ks
    Matrix cross_available;   // 1 if the pair was ever co-selected
    std::vector<double> share;  // Z_hat
    double budget_mean = 0.0;   // m_hat_N
    double budget_sq_mean = 0.0;  // m_hat_Q
    long rounds = 0;
    std::vector<double> weight;   // W (copied for downstream formulas)
    std::vector<long> selections; // S
};

/// Computes every estimator above in O(d^2). Throws ArmUnestimableError if
/// some arm has zero cumulative weight.
MomentEstimates update_moments(const BanditState& state);

/// Adaptive-design covariance matrix:
///   diag:  sigma2_p [Z_p (mQ/mN - 1) + 1]
///   off:   C_pq sqrt(Z_p Z_q) (mQ/mN - 1)
Matrix sigma_hat_matrix(const MomentEstimates& est);

}  // namespace unb
