#include "unb/trial.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "unb/errors.hpp"

namespace unb {

std::string policy_name(PolicyKind p) {
    switch (p) {
        case PolicyKind::unb: return "unb";
        case PolicyKind::er: return "er";
        case PolicyKind::ucb: return "ucb";
    }
    return "unknown";
}

PolicyKind policy_from_name(const std::string& name) {
    if (name == "unb") return PolicyKind::unb;
    if (name == "er") return PolicyKind::er;
    if (name == "ucb") return PolicyKind::ucb;
    throw std::invalid_argument("unknown policy: " + name);
}

void Scenario::validate() const {
    rewards.validate();
    budget.validate();
    hypothesis.validate(rewards.size());
    if (reps < 1) throw std::invalid_argument("reps must be at least 1");
    if (alpha <= 0.0 || alpha >= 0.5) throw std::invalid_argument("alpha must be in (0, 0.5)");
    if (burn_in < 1) throw std::invalid_argument("burn_in must be at least 1");
    if (urn_floor <= 0.0) throw std::invalid_argument("urn_floor must be positive");
    if (sequential) {
        if (delta_design <= 0.0)
            throw std::invalid_argument("sequential mode needs a positive delta_design");
        if (power_target <= 0.5 || power_target >= 1.0)
            throw std::invalid_argument("power_target must be in (0.5, 1)");
        if (looks < 1) throw std::invalid_argument("looks must be at least 1");
        if (t_min < 1) throw std::invalid_argument("t_min must be at least 1");
        spending.validate();
    } else {
        long minimum = policy == PolicyKind::unb
                           ? burn_in * static_cast<long>(rewards.size()) + 1
                           : static_cast<long>(rewards.size());
        if (fixed_samples < minimum)
            throw std::invalid_argument("fixed sample budget must cover the burn-in");
    }
}

double Scenario::true_effect() const {
    std::vector<double> means;
    means.reserve(rewards.size());
    for (const auto& a : rewards.arms) means.push_back(a.mean);
    return hypothesis.value(means);
}

namespace {

std::vector<bool> inferior_arms(const RewardSpec& rewards) {
    double best = 0.0;
    for (const auto& a : rewards.arms) best = std::max(best, a.mean);
    std::vector<bool> inferior(rewards.size());
    for (std::size_t k = 0; k < rewards.size(); ++k)
        inferior[k] = rewards.arms[k].mean < best;
    return inferior;
}

void trace_header(std::ostream* trace, std::size_t d) {
    if (!trace) return;
    *trace << "round";
    for (std::size_t k = 0; k < d; ++k) *trace << ",x" << k + 1;
    for (std::size_t k = 0; k < d; ++k) *trace << ",reward" << k + 1;
    for (std::size_t k = 0; k < d; ++k) *trace << ",urn" << k + 1;
    *trace << "\n";
}

void trace_round(std::ostream* trace, long round, const std::vector<long>& x,
                 const std::vector<double>& rewards, const std::vector<double>& urn) {
    if (!trace) return;
    *trace << round;
    for (long v : x) *trace << "," << v;
    for (std::size_t k = 0; k < rewards.size(); ++k) {
        *trace << ",";
        if (x[k] > 0) *trace << rewards[k];  // unselected rewards stay unobserved
    }
    for (double v : urn) *trace << "," << v;
    *trace << "\n";
}

void finish_counts(const Scenario& scenario, const BanditState& state, TrialResult& result) {
    result.rounds = state.rounds;
    result.arm_samples = state.selections;
    result.total_samples = state.total_selections();
    result.inferior_samples = 0;
    std::vector<bool> inferior = inferior_arms(scenario.rewards);
    for (std::size_t k = 0; k < state.arms(); ++k)
        if (inferior[k]) result.inferior_samples += state.selections[k];
}

TestStat evaluate_policy_statistic(const Scenario& scenario, const MomentEstimates& est) {
    if (scenario.policy == PolicyKind::unb)
        return evaluate_corrected(est, scenario.hypothesis, scenario.naive_statistic);
    return evaluate_classical(est, scenario.hypothesis);
}

}  // namespace

TrialResult run_fixed_trial(const Scenario& scenario, const Environment& env, RngStream& rng,
                            std::ostream* trace) {
    const std::size_t d = scenario.rewards.size();
    trace_header(trace, d);
    long calendar = 0;
    BanditState state(d);
    if (scenario.policy == PolicyKind::unb) {
        state = unb_init({scenario.burn_in, scenario.urn_floor}, env, rng, &calendar);
        while (state.total_selections() < scenario.fixed_samples) {
            long budget = env.draw_budget(rng);
            std::vector<double> rewards = env.draw_rewards(++calendar, rng);
            std::vector<long> x = unb_step(state, budget, rewards, rng);
            trace_round(trace, calendar, x, rewards, state.urn);
        }
    } else {
        while (state.total_selections() < scenario.fixed_samples) {
            std::vector<double> rewards = env.draw_rewards(++calendar, rng);
            std::size_t arm = scenario.policy == PolicyKind::er
                                  ? er_select(state)
                                  : ucb_select(state, state.rounds + 1);
            single_pull_step(state, arm, rewards);
            if (trace) {
                std::vector<long> x(d, 0);
                x[arm] = 1;
                trace_round(trace, calendar, x, rewards, state.urn);
            }
        }
    }

    TrialResult result;
    finish_counts(scenario, state, result);
    try {
        MomentEstimates est = update_moments(state);
        TestStat ts = evaluate_policy_statistic(scenario, est);
        result.rejected = ts.value > normal_upper_quantile(scenario.alpha);
    } catch (const ArmUnestimableError&) {
        result.unestimable = true;  // counted as a non-rejection
    }
    return result;
}

long sequential_safety_cap(const Scenario& scenario, const SequentialDesign& design) {
    std::vector<double> means;
    for (const auto& a : scenario.rewards.arms) means.push_back(a.mean);
    std::vector<double> grad = scenario.hypothesis.gradient(means);
    double unit = 0.0;
    double active = 0.0;
    for (std::size_t k = 0; k < means.size(); ++k) {
        if (grad[k] == 0.0) continue;
        unit += grad[k] * grad[k] * family_variance(scenario.rewards.arms[k]);
        active += 1.0;
    }
    double balanced_rounds = design.info_inflated * unit * active;
    return std::max<long>(1000, static_cast<long>(std::ceil(50.0 * balanced_rounds)));
}

TrialResult run_sequential_trial(const Scenario& scenario, const Environment& env,
                                 const SequentialDesign& design, RngStream& rng,
                                 std::ostream* trace) {
    const std::size_t d = scenario.rewards.size();
    trace_header(trace, d);
    long calendar = 0;
    BanditState state(d);
    if (scenario.policy == PolicyKind::unb)
        state = unb_init({scenario.burn_in, scenario.urn_floor}, env, rng, &calendar);

    MonitorState monitor;
    TrialResult result;
    const long cap = sequential_safety_cap(scenario, design);

    for (;;) {
        std::vector<double> rewards = env.draw_rewards(++calendar, rng);
        if (scenario.policy == PolicyKind::unb) {
            long budget = env.draw_budget(rng);
            std::vector<long> x = unb_step(state, budget, rewards, rng);
            trace_round(trace, calendar, x, rewards, state.urn);
        } else {
            std::size_t arm = scenario.policy == PolicyKind::er
                                  ? er_select(state)
                                  : ucb_select(state, state.rounds + 1);
            single_pull_step(state, arm, rewards);
            if (trace) {
                std::vector<long> x(d, 0);
                x[arm] = 1;
                trace_round(trace, calendar, x, rewards, state.urn);
            }
        }

        if (state.rounds >= scenario.t_min) {
            bool all_seen = true;
            for (std::size_t k = 0; k < d; ++k)
                if (state.weight[k] <= 0.0) all_seen = false;
            if (all_seen) {
                MomentEstimates est = update_moments(state);
                TestStat ts = evaluate_policy_statistic(scenario, est);
                Decision decision =
                    monitor_step(monitor, state.rounds, ts.information, ts.value, design);
                if (decision == Decision::kReject) {
                    result.rejected = true;
                    result.look = monitor.records.back().look;
                    break;
                }
                if (decision == Decision::kAcceptAtMax) break;
            }
        }
        if (state.rounds >= cap) {
            result.safety_stopped = true;  // inconclusive, counted as non-rejection
            break;
        }
    }
    finish_counts(scenario, state, result);
    return result;
}

}  // namespace unb
