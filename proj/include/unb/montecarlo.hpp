#pragma once

#include <functional>
#include <vector>

#include "unb/trial.hpp"

namespace unb {

/// Monte Carlo aggregates over a scenario's replications. The rejection rate
/// reads as empirical size under a true null and as power otherwise.
struct Metrics {
    long reps = 0;
    double rejection_rate = 0.0;
    double rejection_se = 0.0;
    double asn = 0.0;
    double asn_se = 0.0;
    double mean_inferior = 0.0;
    double inferior_se = 0.0;
    double mean_look = 0.0;  // mean stopping look among rejections
    long safety_stops = 0;
    long unestimable = 0;

    double loss(double lambda) const;

    // 95% confidence radii for the reported means.
    double rejection_radius() const { return 1.96 * rejection_se; }
    double asn_radius() const { return 1.96 * asn_se; }
    double inferior_radius() const { return 1.96 * inferior_se; }
};

/// Weighted loss index ASN + lambda * S_inf.
double loss_index(double asn, double s_inf, double lambda);

/// Aggregation is a pure fold over the replication vector, so the result is
/// independent of the execution order of the replications.
Metrics aggregate(const std::vector<TrialResult>& results);

/// Replication i always runs on stream (scenario.seed, i).
std::vector<TrialResult> run_replications(const Scenario& scenario, int threads = 1,
                                          const SequentialDesign* design = nullptr);

Metrics monte_carlo(const Scenario& scenario, int threads = 1);

/// Thread count resolution: the UNB_THREADS environment variable wins,
/// then the request; 0 means hardware concurrency.
int resolve_threads(int requested);

/// Index-parallel loop over [0, n) with a shared work queue.
void parallel_for(long n, int threads, const std::function<void(long)>& body);

}  // namespace unb
