#include "unb/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace unb {

double loss_index(double asn, double s_inf, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("loss_index: lambda must be nonnegative");
    return asn + lambda * s_inf;
}

double Metrics::loss(double lambda) const { return loss_index(asn, mean_inferior, lambda); }

Metrics aggregate(const std::vector<TrialResult>& results) {
    if (results.empty()) throw std::invalid_argument("aggregate: no replications");
    Metrics m;
    m.reps = static_cast<long>(results.size());
    double rejects = 0.0, asn_sum = 0.0, asn_sq = 0.0, inf_sum = 0.0, inf_sq = 0.0;
    double look_sum = 0.0;
    long look_count = 0;
    for (const TrialResult& r : results) {
        rejects += r.rejected ? 1.0 : 0.0;
        double n = static_cast<double>(r.total_samples);
        double s = static_cast<double>(r.inferior_samples);
        asn_sum += n;
        asn_sq += n * n;
        inf_sum += s;
        inf_sq += s * s;
        if (r.rejected) {
            look_sum += r.look;
            ++look_count;
        }
        m.safety_stops += r.safety_stopped ? 1 : 0;
        m.unestimable += r.unestimable ? 1 : 0;
    }
    const double n = static_cast<double>(m.reps);
    m.rejection_rate = rejects / n;
    m.rejection_se = std::sqrt(m.rejection_rate * (1.0 - m.rejection_rate) / n);
    m.asn = asn_sum / n;
    m.mean_inferior = inf_sum / n;
    if (m.reps > 1) {
        m.asn_se = std::sqrt(std::max(0.0, (asn_sq / n - m.asn * m.asn) / (n - 1.0)));
        m.inferior_se =
            std::sqrt(std::max(0.0, (inf_sq / n - m.mean_inferior * m.mean_inferior) / (n - 1.0)));
    }
    m.mean_look = look_count > 0 ? look_sum / look_count : 0.0;
    return m;
}

int resolve_threads(int requested) {
    if (const char* env = std::getenv("UNB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    if (n <= 0) return;
    threads = std::min<long>(std::max(threads, 1), n);
    if (threads == 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                long i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(error);
}

std::vector<TrialResult> run_replications(const Scenario& scenario, int threads,
                                          const SequentialDesign* design) {
    scenario.validate();
    Environment env(scenario.rewards, scenario.budget);

    SequentialDesign planned;
    if (scenario.sequential && design == nullptr) {
        planned = SequentialDesign::plan(scenario.alpha, 1.0 - scenario.power_target,
                                         scenario.delta_design, scenario.looks, scenario.spending,
                                         scenario.t_min);
        design = &planned;
    }

    std::vector<TrialResult> results(scenario.reps);
    parallel_for(scenario.reps, threads, [&](long i) {
        RngStream stream(scenario.seed, static_cast<std::uint64_t>(i));
        results[i] = scenario.sequential
                         ? run_sequential_trial(scenario, env, *design, stream)
                         : run_fixed_trial(scenario, env, stream);
    });
    return results;
}

Metrics monte_carlo(const Scenario& scenario, int threads) {
    return aggregate(run_replications(scenario, threads));
}

}  // namespace unb
