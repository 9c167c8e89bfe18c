#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "unb/errors.hpp"
#include "unb/mvhyper.hpp"

using namespace unb;

namespace {

using Law = std::map<std::vector<long>, double>;

// Independent oracle: exact law of the sequential unit-decrement draw,
// obtained by expanding the process tree. Works for real-valued urns too.
void expand(std::vector<double> w, long budget, double prob, std::vector<long>& x, Law& law) {
    if (budget == 0) {
        law[x] += prob;
        return;
    }
    double total = 0.0;
    for (double v : w) total += v;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] <= 0.0) continue;
        double p = w[k] / total;
        std::vector<double> w2 = w;
        w2[k] = std::max(w2[k] - 1.0, 0.0);
        ++x[k];
        expand(w2, budget - 1, prob * p, x, law);
        --x[k];
    }
}

Law process_law(const std::vector<double>& weights, long budget) {
    Law law;
    std::vector<long> x(weights.size(), 0);
    expand(weights, budget, 1.0, x, law);
    return law;
}

std::vector<std::vector<long>> partitions_up_to(long total_max) {
    // All multisets of positive integers with sum <= total_max.
    std::vector<std::vector<long>> out;
    std::vector<long> current;
    auto rec = [&](auto&& self, long remaining, long max_part) -> void {
        if (!current.empty()) out.push_back(current);
        for (long part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            self(self, remaining - part, part);
            current.pop_back();
        }
    };
    rec(rec, total_max, total_max);
    return out;
}

}  // namespace

TEST_CASE("pmf matches hand enumeration of a 3-unit urn") {
    std::vector<long> w{2, 1};
    CHECK(mvhyper_pmf(2, w, {2, 0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(mvhyper_pmf(2, w, {1, 1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(mvhyper_pmf(2, w, {3, 0}) == 0.0);   // beyond the arm's supply
    CHECK(mvhyper_pmf(2, w, {1, 0}) == 0.0);   // wrong total
}

TEST_CASE("pmf normalizes over the support") {
    std::vector<long> w{4, 2, 1};
    double total = 0.0;
    for (long a = 0; a <= 4; ++a)
        for (long b = 0; b <= 2; ++b)
            for (long c = 0; c <= 1; ++c) total += mvhyper_pmf(3, w, {a, b, c});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pmf rejects non-integral weights") {
    std::vector<double> w{2.5, 1.0};
    CHECK_THROWS_AS(mvhyper_pmf(2, std::span<const double>(w), {1, 1}), std::domain_error);
    std::vector<double> ok{2.0, 1.0};
    CHECK(mvhyper_pmf(2, std::span<const double>(ok), {1, 1}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("process law equals the hypergeometric pmf on integer urns") {
    for (const auto& urn : partitions_up_to(7)) {
        std::vector<double> w(urn.begin(), urn.end());
        long total = 0;
        for (long v : urn) total += v;
        for (long budget = 1; budget <= total; ++budget) {
            Law law = process_law(w, budget);
            double sum = 0.0;
            for (const auto& [x, p] : law) {
                INFO("urn total ", total, " budget ", budget);
                CHECK(p == doctest::Approx(mvhyper_pmf(budget, urn, x)).epsilon(1e-10));
                sum += p;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("exchangeability: permuting arms permutes the law") {
    Law law = process_law({3, 2, 1}, 3);
    Law permuted = process_law({1, 3, 2}, 3);  // arms mapped (0,1,2) -> (1,2,0)
    for (const auto& [x, p] : law) {
        std::vector<long> y{x[2], x[0], x[1]};
        CHECK(permuted.at(y) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("draws exhaust the urn when the budget equals its size") {
    RngStream rng(9, 0);
    std::vector<double> w{2, 1, 0};
    for (int i = 0; i < 20; ++i) {
        std::vector<long> x = mvhyper_sample(3, w, rng);
        CHECK(x == std::vector<long>{2, 1, 0});
    }
}

TEST_CASE("single draw from a symmetric urn is a fair coin") {
    RngStream rng(10, 0);
    std::vector<double> w{5, 5};
    long first = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) first += mvhyper_sample(1, w, rng)[0];
    double freq = static_cast<double>(first) / n;
    CHECK(std::fabs(freq - 0.5) < 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("zero-weight arms are never drawn and budgets always conserved") {
    RngStream rng(11, 0);
    std::vector<double> w{4.0, 0.0, 2.5};
    for (int i = 0; i < 2000; ++i) {
        std::vector<long> x = mvhyper_sample(3, w, rng);
        CHECK(x[1] == 0);
        CHECK(x[0] + x[2] == 3);
    }
}

TEST_CASE("sampler frequencies match the pmf on a real-valued urn oracle") {
    std::vector<double> w{2.5, 1.3};
    Law law = process_law(w, 2);
    RngStream rng(12, 0);
    const int n = 200000;
    Law freq;
    for (int i = 0; i < n; ++i) freq[mvhyper_sample(2, w, rng)] += 1.0 / n;
    for (const auto& [x, p] : law) {
        double se = std::sqrt(p * (1.0 - p) / n);
        INFO("outcome ", x[0], ",", x[1]);
        CHECK(std::fabs(freq[x] - p) < 4.0 * se + 1e-9);
    }
}

TEST_CASE("error paths") {
    RngStream rng(13, 0);
    std::vector<double> zeros{0.0, 0.0};
    CHECK_THROWS_AS(mvhyper_sample(1, zeros, rng), DegenerateUrnError);
    std::vector<double> small{0.5, 0.7};  // capacity ceil(0.5) + ceil(0.7) = 2
    CHECK_THROWS_AS(mvhyper_sample(3, small, rng), CapacityError);
    CHECK_NOTHROW(mvhyper_sample(2, small, rng));
    std::vector<double> w{1.0, 1.0};
    CHECK_THROWS_AS(mvhyper_sample(0, w, rng), std::invalid_argument);
}
