#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "unb/estimators.hpp"
#include "unb/math.hpp"

namespace unb {

/// One-sided test target: reject H0 when h(mu) > 0 is supported. Built-ins
/// fold their null threshold into h, e.g. threshold tests use
/// h(mu) = mu_k - bound.
struct Hypothesis {
    enum class Kind { difference, threshold, control_average, ratio, custom };

    Kind kind = Kind::difference;
    std::size_t i = 0;   // first arm (difference / ratio / threshold)
    std::size_t j = 1;   // second arm (difference / ratio)
    double bound = 0.0;  // null threshold folded into h
    std::vector<std::size_t> depends;  // arm indices h touches

    std::function<double(std::span<const double>)> fn;  // custom functional
    std::function<std::vector<double>(std::span<const double>)> grad_fn;  // optional

    static Hypothesis difference(std::size_t i, std::size_t j);
    static Hypothesis threshold(std::size_t k, double bound);
    static Hypothesis control_average();  // arm 1 vs mean of arms 2 and 3
    static Hypothesis ratio(std::size_t i, std::size_t j, double bound = 1.0);
    static Hypothesis custom(std::function<double(std::span<const double>)> fn,
                             std::vector<std::size_t> depends, double bound = 0.0);

    double value(std::span<const double> means) const;
    /// Analytic gradients for the built-ins; central differences with step
    /// 1e-6 * max(1, |mu_k|) otherwise.
    std::vector<double> gradient(std::span<const double> means) const;

    std::string name() const;
    void validate(std::size_t arms) const;
};

/// Quadratic-form variance of h(mu_hat):
/// sum_ij grad_i grad_j Sigma_ij / sqrt(W_i W_j).
double delta_variance(std::span<const double> grad, std::span<const double> weight,
                      const Matrix& sigma);

/// Standardized one-sided statistic h(mu_hat) / sigma_h.
double test_statistic(double h_value, double sigma_h);

/// Decomposition of the corrected variance against the classical form, plus
/// the closed-form combined factor available for the built-in contrasts.
struct CorrectionFactors {
    double gamma = 1.0;   // corrected quadratic form over the W-denominator form
    double lambda = 1.0;  // W-denominator form over the S-denominator form
    std::vector<double> inflation;  // A_k = Z_k (mQ/mN - 1) + 1
    double gamma_closed = 1.0;      // Gamma^(j) for difference/threshold/control-average
    bool has_closed = false;
};
CorrectionFactors correction_factors(const MomentEstimates& est, const Hypothesis& hyp);

/// Noncentrality diagnostics for the two-arm difference.
double ncp_unb(double delta, double gamma1, double var1, double var2, long s1, long s2);
double ncp_ucb(double delta, double var1, double var2, long t1, long t2);

/// Full corrected test evaluation for an urn-allocation state.
struct TestStat {
    double value = 0.0;       // Psi
    double variance = 0.0;    // sigma2_h
    double information = 0.0; // 1 / sigma2_h
    double h_value = 0.0;
};

/// naive=true drops the adaptive corrections: the covariance matrix is
/// replaced by diag(sigma2_k) over the cumulative weights.
TestStat evaluate_corrected(const MomentEstimates& est, const Hypothesis& hyp, bool naive = false);

/// Classical statistic on per-arm observation counts (ER and UCB baselines).
TestStat evaluate_classical(const MomentEstimates& est, const Hypothesis& hyp);

}  // namespace unb
