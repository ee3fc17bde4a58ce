#include "medrisk/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "medrisk/errors.hpp"
#include "medrisk/parallel.hpp"
#include "medrisk/prob_bounds.hpp"

namespace medrisk {

namespace {

constexpr long kMaxRejections = 1000000;

void check_config(const SimConfig& c) {
    if (c.n < 1) throw UsageError("sample size must be >= 1");
    if (!(c.r >= 0.0)) throw NegativeRadius(c.r);
    if (c.runs < 1) throw UsageError("runs must be >= 1");
    if (!(c.r / std::sqrt(static_cast<double>(c.n)) < 1.0))
        throw DomainError("r/sqrt(n) must be < 1");
}

EmpiricalRisk summarize(const std::vector<double>& stat) {
    double const M = static_cast<double>(stat.size());
    double sum = 0.0;
    for (double x : stat) sum += x;
    double const mean = sum / M;
    EmpiricalRisk out;
    out.value = mean;
    out.runs_used = static_cast<int>(stat.size());
    if (stat.size() < 2) {
        out.ci_lo = out.ci_hi = mean;
        return out;
    }
    double ss = 0.0;
    for (double x : stat) ss += (x - mean) * (x - mean);
    double const half = 1.96 * std::sqrt(ss / (M - 1.0)) / std::sqrt(M);
    out.ci_lo = mean - half;
    out.ci_hi = mean + half;
    return out;
}

}  // namespace

Rng run_rng(std::uint64_t seed, std::uint64_t run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
    return Rng(seq);
}

double uniform01(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> draw_sample(const SimConfig& config, const IdealDistribution& dist, Rng& rng,
                                long* rejections) {
    int const n = config.n;
    double const p = config.r / std::sqrt(static_cast<double>(n));
    int const thr = thinning_threshold(n);
    std::vector<char> u(n, 0);
    long rejected = 0;
    if (p > 0.0) {
        for (;;) {
            int count = 0;
            for (int i = 0; i < n; ++i) {
                u[i] = uniform01(rng) < p;
                count += u[i];
            }
            if (!config.thinned || count <= thr) break;
            if (++rejected >= kMaxRejections)
                throw DegenerateConfig("no admissible contamination pattern after 1e6 draws");
        }
    }
    if (rejections) *rejections = rejected;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = dist.quantile(uniform01(rng));
    for (int i = 0; i < n; ++i) {
        if (!u[i]) continue;
        x[i] = config.contamination_sampler ? config.contamination_sampler(rng)
                                            : config.contamination_point;
    }
    return x;
}

double apply_variant(std::vector<double> sample, MedianVariant variant,
                     const IdealDistribution& dist, Rng* rng) {
    int const n = static_cast<int>(sample.size());
    if (n < 1) throw UsageError("empty sample");
    check_parity(n, variant);
    int const m = n / 2;
    auto at = [&](int k) {  // k-th smallest, 1-based
        std::nth_element(sample.begin(), sample.begin() + (k - 1), sample.end());
        return sample[k - 1];
    };
    switch (variant) {
        case MedianVariant::OddMedian:
            return at(m + 1);
        case MedianVariant::LowerQuantile:
            return at(m);
        case MedianVariant::UpperQuantile:
            return at(m + 1);
        case MedianVariant::BiasCorrected:
            return at(m) + 1.0 / (2.0 * n * dist.f0);
        case MedianVariant::Midpoint:
        case MedianVariant::Randomized: {
            double const hi = at(m + 1);
            // After nth_element everything left of m is <= the (m+1)-th value.
            double const lo = *std::max_element(sample.begin(), sample.begin() + m);
            if (variant == MedianVariant::Midpoint) return 0.5 * (lo + hi);
            if (!rng) throw UsageError("the randomized median needs a random generator");
            return uniform01(*rng) < 0.5 ? lo : hi;
        }
    }
    throw UsageError("unknown variant");
}

EmpiricalRisk empirical_mse(const IdealDistribution& dist, const SimConfig& config) {
    check_config(config);
    MedianVariant const variant = config.variant_rule(config.n);
    check_parity(config.n, variant);
    std::vector<double> stat(config.runs);
    parallel_for(stat.size(), config.threads, [&](std::size_t j) {
        Rng rng = run_rng(config.seed, j);
        double const est = apply_variant(draw_sample(config, dist, rng), variant, dist, &rng);
        stat[j] = config.n * est * est;
    });
    return summarize(stat);
}

BreakdownDemo breakdown_demo(const IdealDistribution& dist, int n, double r, double C, int runs,
                             std::uint64_t seed, unsigned threads) {
    if (n < 1 || n % 2 == 0) throw ParityError("breakdown_demo: n must be odd");
    if (!(C > 0.0)) throw UsageError("breakdown_demo: C must be positive");
    BreakdownDemo out;
    out.p_n = thinning_probability(n, r, n / 2);
    if (!(out.p_n > 0.0)) throw DegenerateConfig("breakdown_demo: P(K > m) is zero");
    out.x0 = std::sqrt(C / out.p_n);
    SimConfig cfg;
    cfg.n = n;
    cfg.r = r;
    cfg.runs = runs;
    cfg.seed = seed;
    cfg.contamination_point = out.x0;
    cfg.variant_rule = [](int) { return MedianVariant::OddMedian; };
    cfg.threads = threads;
    cfg.thinned = false;
    out.unthinned = empirical_mse(dist, cfg);
    cfg.thinned = true;
    out.thinned = empirical_mse(dist, cfg);
    return out;
}

}  // namespace medrisk
