#pragma once

#include <span>
#include <vector>

#include "unb/rng.hpp"

namespace unb {

/// Number of units the urn can supply: sum of per-arm ceilings.
long urn_capacity(std::span<const double> weights);

/// Draw `budget` units from the urn without replacement: each unit picks arm
/// k with probability w_k/|w| and decrements w_k by one (floored at zero).
/// For integer weights this is exactly the multivariate hypergeometric law.
std::vector<long> mvhyper_sample(long budget, std::span<const double> weights, RngStream& rng);

/// Exact pmf for integer urns: prod_k C(w_k, x_k) / C(|w|, budget).
/// Returns 0 for outcomes outside the support.
double mvhyper_pmf(long budget, const std::vector<long>& weights, const std::vector<long>& x);

/// Same pmf with real-valued input; throws std::domain_error unless every
/// weight is an integer.
double mvhyper_pmf(long budget, std::span<const double> weights, const std::vector<long>& x);

}  // namespace unb
