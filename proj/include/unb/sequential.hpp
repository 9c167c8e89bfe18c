#pragma once

#include <string>
#include <vector>

#include "unb/inference.hpp"
#include "unb/rewards.hpp"

namespace unb {

/// Cumulative one-sided error spending over the information fraction.
struct SpendingFunction {
    enum class Family { pocock, obf, power, hsd };

    Family family = Family::obf;
    double alpha = 0.05;
    double param = 1.0;  // q for the power family, gamma for hsd

    double value(double t) const;  // cumulative alpha spent at fraction t
    void validate() const;
    std::string name() const;

    static Family family_from_name(const std::string& name);
};

/// Fixed-design information needed for power 1-eta at one-sided level alpha
/// under the standard normal working model: ((z_alpha + z_eta) / delta)^2.
double information_target(double alpha, double eta, double delta);

struct BoundaryResult {
    std::vector<double> boundaries;  // z-scale critical values, +inf for skipped looks
    std::vector<double> exit_probs;  // achieved per-look exit probability under H0
    std::vector<bool> skipped;
};

/// Solves P(Z_1 >= c_1) = da_1 and P(Z_k >= c_k, Z_j < c_j for j<k) = da_k
/// under the canonical law Cov(Z_i, Z_j) = sqrt(t_i / t_j). The recursion
/// propagates the continuation sub-density of the Brownian score process
/// S_k = sqrt(t_k) Z_k on a uniform grid (grid_nodes per look, +-8 standard
/// deviations) and root-finds each boundary in probability space.
BoundaryResult compute_boundaries(const std::vector<double>& fractions,
                                  const SpendingFunction& spending, int grid_nodes = 513);

/// P(some Z_k >= c_k) when the score process has drift theta * t.
double crossing_probability(const std::vector<double>& fractions,
                            const std::vector<double>& boundaries, double theta,
                            int grid_nodes = 513);

/// Smallest L >= 1 giving the boundary set power 1-eta when the statistic
/// drift at look k is delta * sqrt(L * Imax * t_k); bisection, tolerance 1e-4
/// in power. Independent of delta.
double inflation_factor(const std::vector<double>& fractions, const SpendingFunction& spending,
                        double eta, int grid_nodes = 513);

struct SequentialDesign {
    double alpha = 0.05;
    double eta = 0.1;         // one minus target power
    double delta = 0.0;       // design effect
    std::vector<double> fractions;
    SpendingFunction spending;
    double info_target = 0.0;    // Imax
    double inflation = 1.0;      // L
    double info_inflated = 0.0;  // L * Imax, the monitoring target
    std::vector<double> boundaries;
    std::vector<double> exit_probs;
    long t_min = 50;  // rounds before the first boundary check

    static SequentialDesign plan(double alpha, double eta, double delta, int looks,
                                 const SpendingFunction& spending, long t_min = 50);
};

enum class Decision { kContinue, kReject, kAcceptAtMax };

struct LookRecord {
    int look = 0;  // 1-based
    long round = 0;
    double info = 0.0;
    double fraction = 0.0;
    double psi = 0.0;
    double boundary = 0.0;
    Decision decision = Decision::kContinue;
};

struct MonitorState {
    std::size_t next_look = 0;
    bool finished = false;
    std::vector<LookRecord> records;
};

/// Consumes pending looks whose information fraction has been reached, in
/// order, then checks the stopping-for-information condition.
Decision monitor_step(MonitorState& state, long round, double info, double psi,
                      const SequentialDesign& design);

/// Information-clock diagnostics: gamma = mu_{h,min} / mu_star, the empirical
/// map r -> I_{floor(nr)} / I_n against r^gamma, and its inverse.
double info_fraction_gamma(const RewardSpec& rewards, const Hypothesis& hyp);
double inverse_info_fraction(double t, double gamma);  // g(t) = t^(1/gamma)

struct InfoFractionCurve {
    double gamma = 1.0;
    std::vector<double> r;
    std::vector<double> empirical;  // t_n(r)
    std::vector<double> theory;     // r^gamma
};
InfoFractionCurve info_fraction_curve(const std::vector<double>& info_at_r,
                                      const std::vector<double>& r_grid, double gamma);

}  // namespace unb
