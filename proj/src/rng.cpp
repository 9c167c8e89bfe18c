#include "unb/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace unb {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    // Expand (seed, stream_id) into a full seed sequence so nearby ids do not
    // produce correlated engine states.
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ull * (stream_id + 1));
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s) >> 32),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s) >> 32),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s) >> 32),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s) >> 32),
                      static_cast<std::uint32_t>(splitmix64(s))};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

std::uint64_t RngStream::bits() { return engine_(); }

double RngStream::uniform() {
    // 53-bit mantissa, shifted into the open interval.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    // Marsaglia polar method; the spare deviate is discarded to keep the
    // stream state a simple function of the engine.
    for (;;) {
        double u = 2.0 * uniform() - 1.0;
        double v = 2.0 * uniform() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double RngStream::exponential(double mean) {
    if (mean <= 0.0) throw std::invalid_argument("exponential: mean must be positive");
    return -mean * std::log1p(-uniform());
}

long RngStream::poisson(double lambda) { return poisson_quantile(lambda, uniform()); }

bool RngStream::bernoulli(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli: p must be in [0,1]");
    return uniform() > 1.0 - p;
}

long poisson_quantile(double lambda, double u) {
    if (lambda <= 0.0) throw std::invalid_argument("poisson_quantile: lambda must be positive");
    if (lambda > 500.0) throw std::invalid_argument("poisson_quantile: lambda too large for inversion");
    double p = std::exp(-lambda);
    double cdf = p;
    long k = 0;
    while (u > cdf) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cdf += p;
        if (k > 100000) break;  // u numerically at the far tail
    }
    return k;
}

}  // namespace unb
