#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "medrisk/asymptotics.hpp"
#include "medrisk/distributions.hpp"

namespace medrisk {

using Rng = std::mt19937_64;

/// Independent generator for run `run` of a study seeded with `seed`; the
/// stream depends only on (seed, run).
Rng run_rng(std::uint64_t seed, std::uint64_t run);

/// Uniform on (0, 1), never 0 or 1.
double uniform01(Rng& rng);

struct SimConfig {
    int n = 5;
    double r = 0.0;
    int runs = 10000;
    std::uint64_t seed = 0;
    /// Dirac contamination point, used when no sampler is given.
    double contamination_point = 100.0;
    /// Optional law of the contaminating observations.
    std::function<double(Rng&)> contamination_sampler;
    std::function<MedianVariant(int)> variant_rule = default_variant_for;
    /// Reject samples with more than thinning_threshold(n) contaminated values.
    bool thinned = true;
    unsigned threads = 1;
};

struct EmpiricalRisk {
    double value = 0.0;  ///< n * mean(estimate^2)
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    int runs_used = 0;
};

/// One sample of the (thinned) contaminated model. The Bernoulli indicators
/// are drawn first and the whole vector is redrawn while it exceeds the
/// threshold; then n ideal draws, then one contamination draw per
/// contaminated slot. `rejections`, if given, receives the number of redraws.
std::vector<double> draw_sample(const SimConfig& config, const IdealDistribution& dist, Rng& rng,
                                long* rejections = nullptr);

/// Applies a median variant; the sample is taken by value and reordered.
/// Randomized needs `rng` for its coin.
double apply_variant(std::vector<double> sample, MedianVariant variant,
                     const IdealDistribution& dist, Rng* rng = nullptr);

/// n * mean of squared estimates over config.runs samples with a 1.96-sd
/// normal interval. Bitwise identical for any thread count.
EmpiricalRisk empirical_mse(const IdealDistribution& dist, const SimConfig& config);

struct BreakdownDemo {
    double p_n = 0.0;  ///< P(Bin(n, r/sqrt n) > m)
    double x0 = 0.0;   ///< sqrt(C / p_n)
    EmpiricalRisk unthinned;
    EmpiricalRisk thinned;
};

/// Puts all contamination at x0 = sqrt(C / p_n) and simulates the odd median
/// with and without thinning. Without thinning n * MSE is at least about n C.
BreakdownDemo breakdown_demo(const IdealDistribution& dist, int n, double r, double C, int runs,
                             std::uint64_t seed, unsigned threads = 1);

}  // namespace medrisk
