#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unb/bandit.hpp"
#include "unb/inference.hpp"
#include "unb/sequential.hpp"

namespace unb {

enum class PolicyKind { unb, er, ucb };

std::string policy_name(PolicyKind p);
PolicyKind policy_from_name(const std::string& name);

/// A complete simulation configuration: environment, policy, hypothesis and
/// either a fixed sample budget or a sequential design.
struct Scenario {
    std::string id = "scenario";
    RewardSpec rewards;
    BudgetSpec budget = BudgetSpec::constant(1);
    PolicyKind policy = PolicyKind::unb;
    Hypothesis hypothesis = Hypothesis::difference(0, 1);

    bool sequential = false;
    long fixed_samples = 0;  // total observation budget in fixed mode

    double alpha = 0.05;
    double power_target = 0.9;
    double delta_design = 0.0;  // design effect for sequential planning
    int looks = 10;
    SpendingFunction spending{SpendingFunction::Family::obf, 0.05, 1.0};

    long reps = 2000;
    std::uint64_t seed = 1;

    long burn_in = 20;       // urn policy burn-in pulls per arm
    double urn_floor = 1.0;
    long t_min = 50;
    bool naive_statistic = false;  // drop the adaptive variance corrections

    void validate() const;
    double true_effect() const;  // h at the true means
    bool null_is_true() const { return true_effect() <= 0.0; }
};

struct TrialResult {
    bool rejected = false;
    long rounds = 0;           // reinforcement rounds played
    long total_samples = 0;    // observations consumed, burn-in included
    std::vector<long> arm_samples;
    long inferior_samples = 0; // observations on arms with suboptimal mean
    int look = 0;              // 1-based look index at stop; 0 if none
    bool safety_stopped = false;
    bool unestimable = false;
};

TrialResult run_fixed_trial(const Scenario& scenario, const Environment& env, RngStream& rng,
                            std::ostream* trace = nullptr);

TrialResult run_sequential_trial(const Scenario& scenario, const Environment& env,
                                 const SequentialDesign& design, RngStream& rng,
                                 std::ostream* trace = nullptr);

/// Round cap for sequential runs: 50x the balanced-allocation round count
/// that would reach the inflated information target.
long sequential_safety_cap(const Scenario& scenario, const SequentialDesign& design);

}  // namespace unb
