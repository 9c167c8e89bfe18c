#include "unb/mvhyper.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "unb/errors.hpp"

namespace unb {

long urn_capacity(std::span<const double> weights) {
    long cap = 0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("urn weights must be nonnegative");
        cap += static_cast<long>(std::ceil(w));
    }
    return cap;
}

std::vector<long> mvhyper_sample(long budget, std::span<const double> weights, RngStream& rng) {
    if (budget < 1) throw std::invalid_argument("mvhyper_sample: budget must be positive");
    const std::size_t d = weights.size();
    std::vector<double> w(weights.begin(), weights.end());
    double total = 0.0;
    for (double v : w) {
        if (v < 0.0) throw std::invalid_argument("mvhyper_sample: negative weight");
        total += v;
    }
    if (total <= 0.0) throw DegenerateUrnError("mvhyper_sample: all urn weights are zero");
    if (budget > urn_capacity(weights))
        throw CapacityError("mvhyper_sample: budget " + std::to_string(budget) +
                            " exceeds urn capacity " + std::to_string(urn_capacity(weights)));

    std::vector<long> x(d, 0);
    for (long draw = 0; draw < budget; ++draw) {
        double r = rng.uniform() * total;
        std::size_t pick = d - 1;
        for (std::size_t k = 0; k < d; ++k) {
            if (r < w[k]) {
                pick = k;
                break;
            }
            r -= w[k];
        }
        // Floating error can land past the last positive weight; walk back.
        while (w[pick] <= 0.0 && pick > 0) --pick;
        double dec = std::min(w[pick], 1.0);
        w[pick] -= dec;
        total -= dec;
        ++x[pick];
    }
    return x;
}

double mvhyper_pmf(long budget, const std::vector<long>& weights, const std::vector<long>& x) {
    if (budget < 1) throw std::invalid_argument("mvhyper_pmf: budget must be positive");
    if (weights.size() != x.size()) throw std::invalid_argument("mvhyper_pmf: size mismatch");
    long total = 0;
    long drawn = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] < 0) throw std::domain_error("mvhyper_pmf: weights must be nonnegative integers");
        total += weights[k];
        if (x[k] < 0 || x[k] > weights[k]) return 0.0;
        drawn += x[k];
    }
    if (drawn != budget || budget > total) return 0.0;

    auto log_choose = [](long n, long k) {
        return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    };
    double lp = -log_choose(total, budget);
    for (std::size_t k = 0; k < weights.size(); ++k) lp += log_choose(weights[k], x[k]);
    return std::exp(lp);
}

double mvhyper_pmf(long budget, std::span<const double> weights, const std::vector<long>& x) {
    std::vector<long> w(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        double r = std::round(weights[k]);
        if (std::fabs(weights[k] - r) > 1e-9)
            throw std::domain_error("mvhyper_pmf: weights must be integral");
        w[k] = static_cast<long>(r);
    }
    return mvhyper_pmf(budget, w, x);
}

}  // namespace unb
