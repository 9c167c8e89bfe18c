#pragma once

#include <cstdint>
#include <random>

namespace unb {

/// Seedable random stream. Streams are indexed by (seed, stream_id) so that
/// replication i of a run always sees the same draw sequence, and distinct
/// replications get statistically independent engines.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t bits();
    double uniform();  // open interval (0,1)
    double normal();
    double exponential(double mean);
    long poisson(double lambda);
    bool bernoulli(double p);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// Quantile of Poisson(lambda) at u in (0,1), by CDF inversion.
long poisson_quantile(double lambda, double u);

}  // namespace unb
