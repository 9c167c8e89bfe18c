#include "unb/bandit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "unb/mvhyper.hpp"

namespace unb {

BanditState::BanditState(std::size_t arms)
    : urn(arms, 0.0),
      weight(arms, 0.0),
      selections(arms, 0),
      weighted_reward(arms, 0.0),
      weighted_reward_sq(arms, 0.0),
      co_weight(arms, 0.0),
      co_reward(arms, 0.0),
      share_sum(arms, 0.0) {}

long BanditState::total_selections() const {
    long s = 0;
    for (long v : selections) s += v;
    return s;
}

void accumulate(BanditState& state, std::span<const long> x, std::span<const double> rewards,
                long budget, bool budget_round) {
    const std::size_t d = state.arms();
    if (x.size() != d || rewards.size() != d)
        throw std::invalid_argument("accumulate: dimension mismatch");
    if (budget == 0) return;  // zero draw contributes nothing

    for (std::size_t k = 0; k < d; ++k) {
        if (x[k] == 0) continue;
        double xk = static_cast<double>(x[k]);
        state.weight[k] += xk;
        state.selections[k] += 1;
        state.weighted_reward[k] += xk * rewards[k];
        state.weighted_reward_sq[k] += xk * rewards[k] * rewards[k];
        for (std::size_t s = k + 1; s < d; ++s) {
            if (x[s] == 0) continue;
            double cross_w = xk * static_cast<double>(x[s]);
            double cross_r = cross_w * rewards[k] * rewards[s];
            state.co_weight(k, s) += cross_w;
            state.co_weight(s, k) += cross_w;
            state.co_reward(k, s) += cross_r;
            state.co_reward(s, k) += cross_r;
        }
    }
    if (budget_round) {
        state.rounds += 1;
        state.budget_sum += static_cast<double>(budget);
        state.budget_sq_sum += static_cast<double>(budget) * static_cast<double>(budget);
        for (std::size_t k = 0; k < d; ++k)
            state.share_sum[k] += static_cast<double>(x[k]) / static_cast<double>(budget);
    }
}

BanditState unb_init(const UnbConfig& config, const Environment& env, RngStream& rng,
                     long* calendar) {
    if (config.burn_in < 1) throw std::invalid_argument("burn_in must be at least 1");
    if (config.urn_floor <= 0.0) throw std::invalid_argument("urn_floor must be positive");

    const std::size_t d = env.rewards().size();
    BanditState state(d);
    long round = calendar ? *calendar : 0;
    std::vector<long> x(d, 0);
    for (std::size_t k = 0; k < d; ++k) {
        for (long pull = 0; pull < config.burn_in; ++pull) {
            std::vector<double> rewards = env.draw_rewards(++round, rng);
            x.assign(d, 0);
            x[k] = 1;
            accumulate(state, x, rewards, 1, /*budget_round=*/false);
            state.urn[k] += rewards[k];
        }
    }
    for (std::size_t k = 0; k < d; ++k) state.urn[k] = std::max(state.urn[k], config.urn_floor);
    if (calendar) *calendar = round;
    return state;
}

std::vector<long> unb_step(BanditState& state, long budget, std::span<const double> rewards,
                           RngStream& rng) {
    if (budget < 1) throw std::invalid_argument("unb_step: budget must be positive");
    // A freshly seeded urn can hold fewer units than the requested budget;
    // draw what it can supply.
    long effective = std::min(budget, urn_capacity(state.urn));
    std::vector<long> x = mvhyper_sample(effective, state.urn, rng);
    for (std::size_t k = 0; k < state.arms(); ++k)
        if (x[k] > 0) state.urn[k] += static_cast<double>(x[k]) * rewards[k];
    accumulate(state, x, rewards, effective);
    return x;
}

std::size_t er_select(const BanditState& state) {
    return static_cast<std::size_t>(state.total_selections()) % state.arms();
}

double ucb_index(double mean, long round, long pulls) {
    return mean + std::sqrt(2.0 * std::log(static_cast<double>(round)) /
                            static_cast<double>(pulls));
}

std::size_t ucb_select(const BanditState& state, long round) {
    const std::size_t d = state.arms();
    for (std::size_t k = 0; k < d; ++k)
        if (state.selections[k] == 0) return k;
    std::size_t best = 0;
    double best_index = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < d; ++k) {
        double mean = state.weighted_reward[k] / state.weight[k];
        double idx = ucb_index(mean, round, state.selections[k]);
        if (idx > best_index) {
            best_index = idx;
            best = k;
        }
    }
    return best;
}

void single_pull_step(BanditState& state, std::size_t arm, std::span<const double> rewards) {
    std::vector<long> x(state.arms(), 0);
    x[arm] = 1;
    accumulate(state, x, rewards, 1);
}

}  // namespace unb
