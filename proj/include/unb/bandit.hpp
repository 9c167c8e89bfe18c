#pragma once

#include <span>
#include <vector>

#include "unb/math.hpp"
#include "unb/rewards.hpp"
#include "unb/rng.hpp"

namespace unb {

/// Per-replication allocation state: the urn plus every streaming sum the
/// moment estimators need. Exclusively owned by one replication.
struct BanditState {
    explicit BanditState(std::size_t arms);

    std::size_t arms() const { return urn.size(); }
    long total_selections() const;

    std::vector<double> urn;  // cumulative weighted reward R (the sampling population)

    long rounds = 0;  // budget rounds seen by the moment estimators (burn-in pulls excluded)
    std::vector<double> weight;              // W_k = sum_t X_{t,k}
    std::vector<long> selections;            // S_k = sum_t 1{X_{t,k} > 0}
    std::vector<double> weighted_reward;     // A_k = sum_t X_{t,k} xi_{t,k}
    std::vector<double> weighted_reward_sq;  // B_k = sum_t X_{t,k} xi_{t,k}^2
    Matrix co_weight;                        // U_{ks} = sum_t X_{t,k} X_{t,s}
    Matrix co_reward;                        // C_{ks} = sum_t X_{t,k} X_{t,s} xi_{t,k} xi_{t,s}
    std::vector<double> share_sum;           // sum_t X_{t,k} / N_t
    double budget_sum = 0.0;                 // sum_t N_t
    double budget_sq_sum = 0.0;              // sum_t N_t^2
};

/// Folds one round into the streaming sums. Burn-in pulls pass
/// budget_round=false: they enter the weighted sums with unit weight but are
/// not counted as reinforcement rounds.
void accumulate(BanditState& state, std::span<const long> x, std::span<const double> rewards,
                long budget, bool budget_round = true);

struct UnbConfig {
    long burn_in = 20;      // forced pulls per arm seeding the urn
    double urn_floor = 1.0; // lower bound on each initial urn weight
};

/// Pulls each arm burn_in times, seeds the urn with the per-arm reward sums
/// (floored at urn_floor) and folds the burn-in observations into the sums.
BanditState unb_init(const UnbConfig& config, const Environment& env, RngStream& rng,
                     long* calendar = nullptr);

/// One urn round: draw weights from the urn, consume the selected rewards,
/// reinforce the urn, update the sums. Returns the drawn weight vector.
std::vector<long> unb_step(BanditState& state, long budget, std::span<const double> rewards,
                           RngStream& rng);

/// Round-robin arm for equal randomization: exactly balanced counts.
std::size_t er_select(const BanditState& state);

/// Upper-confidence index with exploration constant 2.
double ucb_index(double mean, long round, long pulls);

/// UCB1 choice: any unpulled arm first, then the largest index, lowest index
/// winning ties. `round` is the 1-based number of the round being played.
std::size_t ucb_select(const BanditState& state, long round);

/// Single-pull round shared by the ER and UCB baselines.
void single_pull_step(BanditState& state, std::size_t arm, std::span<const double> rewards);

}  // namespace unb
