#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "unb/bandit.hpp"

using namespace unb;

namespace {

Environment bernoulli_env(double p1, double p2) {
    RewardSpec spec;
    spec.arms = {{Family::bernoulli, p1}, {Family::bernoulli, p2}};
    return Environment(spec, BudgetSpec::constant(1));
}

struct Round {
    std::vector<long> x;
    std::vector<double> rewards;
    long budget;
    bool budget_round;
};

// Batch recomputation of every streaming sum from a stored history.
BanditState replay(std::size_t arms, const std::vector<Round>& history) {
    BanditState state(arms);
    for (const Round& r : history) accumulate(state, r.x, r.rewards, r.budget, r.budget_round);
    return state;
}

}  // namespace

TEST_CASE("accumulate reproduces hand-computed weighted sums") {
    BanditState state(2);
    accumulate(state, std::vector<long>{2, 0}, std::vector<double>{1.0, 0.0}, 2);
    accumulate(state, std::vector<long>{1, 0}, std::vector<double>{4.0, 0.3}, 1);
    CHECK(state.weight[0] == doctest::Approx(3.0));
    CHECK(state.weighted_reward[0] == doctest::Approx(6.0));
    CHECK(state.weighted_reward[0] / state.weight[0] == doctest::Approx(2.0));
    CHECK(state.weighted_reward_sq[0] == doctest::Approx(2.0 + 16.0));
    CHECK(state.selections[0] == 2);
    CHECK(state.selections[1] == 0);
    CHECK(state.weight[1] == doctest::Approx(0.0));  // zero-weight arm untouched
}

TEST_CASE("a zero draw leaves the state unchanged") {
    BanditState state(2);
    accumulate(state, std::vector<long>{1, 0}, std::vector<double>{1.0, 0.0}, 1);
    BanditState before = state;
    accumulate(state, std::vector<long>{0, 0}, std::vector<double>{5.0, 5.0}, 0);
    CHECK(state.rounds == before.rounds);
    CHECK(state.weight == before.weight);
    CHECK(state.budget_sum == before.budget_sum);
    CHECK(state.share_sum == before.share_sum);
}

TEST_CASE("burn-in seeds the urn with reward sums above the floor") {
    RngStream rng(3, 1);
    // Near-deterministic success: reward sums are the pull counts.
    Environment sure = bernoulli_env(1.0 - 1e-12, 1.0 - 1e-12);
    BanditState state = unb_init({5, 1.0}, sure, rng);
    CHECK(state.urn[0] == doctest::Approx(5.0));
    CHECK(state.urn[1] == doctest::Approx(5.0));
    CHECK(state.selections[0] == 5);
    CHECK(state.weight[1] == doctest::Approx(5.0));
    CHECK(state.rounds == 0);  // burn-in pulls are not reinforcement rounds

    // Near-certain zero rewards: the floor keeps every arm alive.
    Environment hopeless = bernoulli_env(1e-12, 1e-12);
    BanditState floored = unb_init({5, 1.0}, hopeless, rng);
    CHECK(floored.urn[0] == doctest::Approx(1.0));
    CHECK(floored.urn[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(unb_init({0, 1.0}, sure, rng), std::invalid_argument);
    CHECK_THROWS_AS(unb_init({5, 0.0}, sure, rng), std::invalid_argument);
}

TEST_CASE("urn steps conserve the budget and reinforce by the weighted reward") {
    RngStream rng(4, 2);
    Environment env = bernoulli_env(1.0 - 1e-12, 1.0 - 1e-12);  // rewards identically 1
    BanditState state = unb_init({5, 1.0}, env, rng);
    for (int t = 0; t < 50; ++t) {
        double before = state.urn[0] + state.urn[1];
        std::vector<double> rewards{1.0, 1.0};
        std::vector<long> x = unb_step(state, 4, rewards, rng);
        CHECK(x[0] + x[1] == 4);
        // Constant unit rewards: the urn total grows by exactly the budget.
        CHECK(state.urn[0] + state.urn[1] == doctest::Approx(before + 4.0));
    }
}

TEST_CASE("selection counters move by one exactly when an arm receives weight") {
    RngStream rng(5, 2);
    Environment env = bernoulli_env(0.7, 0.4);
    BanditState state = unb_init({5, 1.0}, env, rng);
    for (int t = 0; t < 200; ++t) {
        std::vector<long> s_before = state.selections;
        std::vector<double> rewards = env.draw_rewards(t + 11, rng);
        std::vector<long> x = unb_step(state, 3, rewards, rng);
        for (std::size_t k = 0; k < 2; ++k)
            CHECK(state.selections[k] - s_before[k] == (x[k] > 0 ? 1 : 0));
    }
}

TEST_CASE("zero urn weight excludes an arm from the action set") {
    RngStream rng(6, 2);
    BanditState state(2);
    state.urn = {3.7, 0.0};
    for (int t = 0; t < 100; ++t) {
        std::vector<double> rewards{0.5, 0.5};
        std::vector<long> x = unb_step(state, 2, rewards, rng);
        CHECK(x[1] == 0);
    }
}

TEST_CASE("streaming sums equal batch recomputation over a 50-round history") {
    RngStream rng(7, 3);
    RewardSpec spec;
    spec.arms = {{Family::poisson, 6.5}, {Family::poisson, 6.0}};
    Environment env(spec, BudgetSpec::uniform({3, 4, 5}));

    long calendar = 0;
    BanditState state = unb_init({5, 1.0}, env, rng, &calendar);
    std::vector<Round> history;
    // Burn-in rounds as the init routine folded them.
    {
        RngStream replay_rng(7, 3);
        for (std::size_t k = 0; k < 2; ++k)
            for (int pull = 0; pull < 5; ++pull) {
                std::vector<double> rewards = env.draw_rewards(0, replay_rng);
                std::vector<long> x{k == 0 ? 1L : 0L, k == 1 ? 1L : 0L};
                history.push_back({x, rewards, 1, false});
            }
    }
    for (int t = 0; t < 50; ++t) {
        long budget = env.draw_budget(rng);
        std::vector<double> rewards = env.draw_rewards(++calendar, rng);
        std::vector<long> x = unb_step(state, budget, rewards, rng);
        history.push_back({x, rewards, budget, true});
    }
    BanditState batch = replay(2, history);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(state.weight[k] == batch.weight[k]);
        CHECK(state.selections[k] == batch.selections[k]);
        CHECK(state.weighted_reward[k] == batch.weighted_reward[k]);
        CHECK(state.weighted_reward_sq[k] == batch.weighted_reward_sq[k]);
        CHECK(state.share_sum[k] == batch.share_sum[k]);
    }
    CHECK(state.co_weight(0, 1) == batch.co_weight(0, 1));
    CHECK(state.co_reward(0, 1) == batch.co_reward(0, 1));
    CHECK(state.budget_sum == batch.budget_sum);
    CHECK(state.budget_sq_sum == batch.budget_sq_sum);
    CHECK(state.rounds == batch.rounds);
}

TEST_CASE("round-robin gives exactly balanced counts") {
    BanditState state(2);
    std::vector<double> rewards{1.0, 1.0};
    for (int t = 0; t < 2 * 17; ++t) single_pull_step(state, er_select(state), rewards);
    CHECK(state.selections[0] == 17);
    CHECK(state.selections[1] == 17);
    // Never further than one apart along the way.
    BanditState s3(3);
    for (int t = 0; t < 100; ++t) {
        single_pull_step(s3, er_select(s3), std::vector<double>{1, 1, 1});
        long lo = *std::min_element(s3.selections.begin(), s3.selections.end());
        long hi = *std::max_element(s3.selections.begin(), s3.selections.end());
        CHECK(hi - lo <= 1);
    }
}

TEST_CASE("ucb index value and initial sweep") {
    CHECK(ucb_index(0.5, 100, 10) == doctest::Approx(1.4597).epsilon(1e-4));

    BanditState state(3);
    std::vector<double> rewards{1.0, 1.0, 1.0};
    CHECK(ucb_select(state, 1) == 0);  // unpulled arms first
    single_pull_step(state, 0, rewards);
    CHECK(ucb_select(state, 2) == 1);
    single_pull_step(state, 1, rewards);
    CHECK(ucb_select(state, 3) == 2);
}

TEST_CASE("ucb breaks index ties on the lowest arm") {
    BanditState state(2);
    std::vector<double> rewards{0.5, 0.5};
    single_pull_step(state, 0, rewards);
    single_pull_step(state, 1, rewards);
    CHECK(ucb_select(state, 3) == 0);
}
