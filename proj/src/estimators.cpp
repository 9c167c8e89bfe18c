#include "unb/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "unb/errors.hpp"

namespace unb {

MomentEstimates update_moments(const BanditState& state) {
    const std::size_t d = state.arms();
    if (state.rounds < 1) throw std::logic_error("update_moments: no reinforcement rounds yet");

    MomentEstimates est;
    est.mean.resize(d);
    est.second_moment.resize(d);
    est.variance.resize(d);
    est.variance_clamped.assign(d, false);
    est.cross_moment = Matrix(d, 0.0);
    est.cross_cov = Matrix(d, 0.0);
    est.cross_corr = Matrix(d, 0.0);
    est.cross_available = Matrix(d, 0.0);
    est.share.resize(d);
    est.rounds = state.rounds;
    est.weight = state.weight;
    est.selections = state.selections;

    const double n = static_cast<double>(state.rounds);
    est.budget_mean = state.budget_sum / n;
    est.budget_sq_mean = state.budget_sq_sum / n;

    for (std::size_t k = 0; k < d; ++k) {
        if (state.weight[k] <= 0.0)
            throw ArmUnestimableError(k, "arm " + std::to_string(k + 1) +
                                             " has zero cumulative weight");
        est.mean[k] = state.weighted_reward[k] / state.weight[k];
        est.second_moment[k] = state.weighted_reward_sq[k] / state.weight[k];
        double v = est.second_moment[k] - est.mean[k] * est.mean[k];
        if (v < kVarianceFloor) {
            v = kVarianceFloor;
            est.variance_clamped[k] = true;
        }
        est.variance[k] = v;
        est.share[k] = state.share_sum[k] / n;
    }
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t s = k + 1; s < d; ++s) {
            if (state.co_weight(k, s) > 0.0) {
                double q = state.co_reward(k, s) / state.co_weight(k, s);
                double c = q - est.mean[k] * est.mean[s];
                // Cauchy-Schwarz clamp: early-round noise can push the raw
                // covariance outside the envelope, which would make the
                // assembled matrix indefinite.
                double envelope = std::sqrt(est.variance[k] * est.variance[s]);
                c = std::clamp(c, -envelope, envelope);
                est.cross_moment(k, s) = est.cross_moment(s, k) = q;
                est.cross_cov(k, s) = est.cross_cov(s, k) = c;
                double denom = std::sqrt(est.second_moment[k] * est.second_moment[s]);
                if (denom > 0.0) est.cross_corr(k, s) = est.cross_corr(s, k) = c / denom;
                est.cross_available(k, s) = est.cross_available(s, k) = 1.0;
            }
            // Pairs never co-selected keep C_hat = 0 with the flag left unset.
        }
    return est;
}

Matrix sigma_hat_matrix(const MomentEstimates& est) {
    if (est.budget_mean <= 0.0) throw std::logic_error("sigma_hat_matrix: mean budget is zero");
    const std::size_t d = est.mean.size();
    const double inflation = est.budget_sq_mean / est.budget_mean - 1.0;
    Matrix sigma(d, 0.0);
    for (std::size_t p = 0; p < d; ++p) {
        sigma(p, p) = est.variance[p] * (est.share[p] * inflation + 1.0);
        for (std::size_t q = p + 1; q < d; ++q) {
            double v = est.cross_cov(p, q) * std::sqrt(est.share[p] * est.share[q]) * inflation;
            sigma(p, q) = v;
            sigma(q, p) = v;
        }
    }
    return sigma;
}

}  // namespace unb
