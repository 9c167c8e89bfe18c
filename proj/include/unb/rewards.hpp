#pragma once

#include <functional>
#include <string>
#include <vector>

#include "unb/math.hpp"
#include "unb/rng.hpp"

namespace unb {

enum class Family { bernoulli, poisson, exponential };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct ArmSpec {
    Family family = Family::bernoulli;
    double mean = 0.5;
};

double family_variance(const ArmSpec& arm);
double family_quantile(const ArmSpec& arm, double u);

/// Environment description: per-arm marginals plus a uniform pairwise target
/// correlation. A drift schedule may override the mean at a given round; the
/// default is the constant spec mean.
struct RewardSpec {
    std::vector<ArmSpec> arms;
    double rho = 0.0;
    std::function<double(std::size_t arm, long round)> drift;  // optional

    std::size_t size() const { return arms.size(); }
    double mean_at(std::size_t arm, long round) const;
    void validate() const;
};

/// Reinforcement budget: uniform over a finite set of positive integers.
struct BudgetSpec {
    std::vector<long> support;

    static BudgetSpec constant(long n) { return BudgetSpec{{n}}; }
    static BudgetSpec uniform(std::vector<long> values) { return BudgetSpec{std::move(values)}; }

    double mean() const;     // N
    double mean_sq() const;  // Q
    long max_value() const;
    void validate() const;
};

/// Pearson correlation of the pair (Q_a(Phi(Z1)), Q_b(Phi(Z2))) when (Z1,Z2)
/// is standard bivariate normal with correlation rho_z. Deterministic
/// quadrature; exact lattice sums for discrete marginals.
double induced_correlation(const ArmSpec& a, const ArmSpec& b, double rho_z);

/// Largest Pearson correlation the Gaussian coupling can produce for the pair.
double max_attainable_correlation(const ArmSpec& a, const ArmSpec& b);

/// Bisection on the latent correlation until the induced Pearson correlation
/// matches rho_target. Monotone in the target; throws CalibrationError when
/// the target exceeds the attainable bound.
double calibrate_copula(const ArmSpec& a, const ArmSpec& b, double rho_target);

/// Draws the full reward vector every round (the engine consumes only the
/// selected arms), so the reward law never depends on the allocation path.
class Environment {
public:
    Environment(RewardSpec rewards, BudgetSpec budget);

    std::vector<double> draw_rewards(long round, RngStream& rng) const;
    long draw_budget(RngStream& rng) const;

    const RewardSpec& rewards() const { return rewards_; }
    const BudgetSpec& budget() const { return budget_; }
    bool correlated() const { return correlated_; }
    double latent_correlation(std::size_t i, std::size_t j) const { return latent_corr_(i, j); }

private:
    RewardSpec rewards_;
    BudgetSpec budget_;
    bool correlated_ = false;
    Matrix latent_corr_;
    Matrix latent_chol_;
};

}  // namespace unb
