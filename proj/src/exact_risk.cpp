#include "medrisk/exact_risk.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "medrisk/errors.hpp"
#include "medrisk/parallel.hpp"
#include "medrisk/prob_bounds.hpp"

namespace medrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// a * log(x) with the convention 0 * log(0) = 0.
double scaled_log(int a, double log_x) { return a == 0 ? 0.0 : a * log_x; }

double log_order_stat_const(int N, int i) {
    return std::log(static_cast<double>(N)) + log_choose(N - 1, i - 1);
}

double order_stat_log_density(const IdealDistribution& d, int N, int i, double log_c, double t) {
    double const lf = d.eval_log_pdf(t);
    if (lf == -kInf) return -kInf;
    return log_c + scaled_log(i - 1, d.eval_log_cdf(t)) + scaled_log(N - i, d.eval_log_sf(t)) + lf;
}

// Location and spread of X_[i:N], used to seed the peaked integrator.
std::pair<double, double> order_stat_hint(const IdealDistribution& d, int N, int i) {
    double const p = static_cast<double>(i) / (N + 1.0);
    double const center = d.quantile(p);
    double const dens = d.pdf(center);
    double scale = std::sqrt(p * (1.0 - p) / (N + 2.0)) / dens;
    if (!(scale > 0.0) || !std::isfinite(scale)) scale = d.scale;
    scale = std::min(scale, d.scale);
    if (!std::isfinite(center)) return {0.0, scale};
    return {center, scale};
}

double integrate_order_stat(const IdealDistribution& d, int N, int i,
                            const std::function<double(double)>& w, const QuadratureSpec& quad,
                            double lo = -kInf, double hi = kInf) {
    if (i < 1 || i > N) throw IndexOutOfRange("order statistic index outside 1..N");
    double const log_c = log_order_stat_const(N, i);
    auto const [center, scale] = order_stat_hint(d, N, i);
    auto integrand = [&](double t) {
        double const lg = order_stat_log_density(d, N, i, log_c, t);
        return lg == -kInf ? 0.0 : w(t) * std::exp(lg);
    };
    return integrate_peaked(integrand, center, scale, quad, lo, hi).value;
}

// P(lo <= Bin(N, F(x)) <= hi).
double binomial_band(const IdealDistribution& d, int N, int lo, int hi, double x) {
    double const lF = d.eval_log_cdf(x), lS = d.eval_log_sf(x);
    double s = 0.0;
    for (int l = std::max(lo, 0); l <= std::min(hi, N); ++l)
        s += std::exp(log_choose(N, l) + scaled_log(l, lF) + scaled_log(N - l, lS));
    return s;
}

// E[w(X_[q:n])] for the full sample when k of the n observations are
// contaminated as described by `config`.
double contaminated_order_stat(const IdealDistribution& d, int n, int q, int k,
                               const ContaminationConfig& config,
                               const std::function<double(double)>& w, const QuadratureSpec& quad) {
    int const N = n - k;
    if (k == 0) return integrate_order_stat(d, N, q, w, quad);
    bool const right = config.side == ContaminationSide::Right;
    if (!config.contamination_distance) {
        // All contaminated values are beyond every t that matters.
        return right ? integrate_order_stat(d, N, q, w, quad)
                     : integrate_order_stat(d, N, q - k, w, quad);
    }
    double const x0 = right ? *config.contamination_distance : -*config.contamination_distance;
    // Below x0 only ideal observations count; above it the k points count too.
    double below = integrate_order_stat(d, N, q, w, quad, -kInf, x0);
    double above = q - k >= 1 ? integrate_order_stat(d, N, q - k, w, quad, x0, kInf) : 0.0;
    double const atom = binomial_band(d, N, q - k, q - 1, x0);
    return below + above + w(x0) * atom;
}

template <typename PerK>
double mixture(const std::vector<double>& weights, unsigned threads, PerK&& per_k) {
    double const wmax = *std::max_element(weights.begin(), weights.end());
    std::vector<double> terms(weights.size(), 0.0);
    parallel_for(weights.size(), threads, [&](std::size_t k) {
        if (weights[k] < 1e-18 * wmax) return;
        terms[k] = weights[k] * per_k(static_cast<int>(k));
    });
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

void check_common(const ContaminationConfig& config, int n) {
    if (!(config.r >= 0.0)) throw NegativeRadius(config.r);
    if (n < 1) throw UsageError("sample size must be >= 1");
    if (config.contamination_distance && !(*config.contamination_distance > 0.0))
        throw UsageError("contamination distance must be positive");
}

RiskResult make_result(double value, int n, double r, MedianVariant v) {
    RiskResult out;
    out.value = value;
    out.method = RiskMethod::ExactQuadrature;
    out.n = n;
    out.r = r;
    out.variant = v;
    return out;
}

}  // namespace

double order_stat_density(const IdealDistribution& dist, int n, int k, double t) {
    if (n < 1 || k < 1 || k > n)
        throw IndexOutOfRange("order_stat_density: need 1 <= k <= n, got k = " +
                              std::to_string(k) + ", n = " + std::to_string(n));
    double const lg = order_stat_log_density(dist, n, k, log_order_stat_const(n, k), t);
    return lg == -kInf ? 0.0 : std::exp(lg);
}

double contaminated_density(const IdealDistribution& dist, int n, int j, int k, double t) {
    if (n < 1 || n % 2 == 0) throw ParityError("contaminated_density: n must be odd");
    int const m = n / 2;
    if (j < 0 || k < j || k > m)
        throw IndexOutOfRange("contaminated_density: need 0 <= j <= k <= m");
    // The formula is the density of X_[(m+1-j):(n-k)].
    return order_stat_density(dist, n - k, m + 1 - j, t);
}

double order_stat_expectation(const IdealDistribution& dist, int N, int i,
                              const std::function<double(double)>& w, const QuadratureSpec& quad) {
    return integrate_order_stat(dist, N, i, w, quad);
}

double consecutive_midpoint_second_moment(const IdealDistribution& d, int N, int i,
                                          const QuadratureSpec& quad, double shift) {
    if (i < 1 || i + 1 > N) throw IndexOutOfRange("consecutive pair needs 1 <= i < N");
    int const a = i - 1;      // exponent of F at the lower point s
    int const b = N - i - 1;  // exponent of 1-F at the upper point u
    double const log_c = std::lgamma(N + 1.0) - std::lgamma(i + 0.0) - std::lgamma(N - i + 0.0);
    QuadratureSpec inner_spec = quad;
    inner_spec.abs_tol = DBL_MIN;

    auto outer = [&](double u) {
        double const lf_u = d.eval_log_pdf(u);
        if (lf_u == -kInf) return 0.0;
        double const lF_u = d.eval_log_cdf(u);
        double const lw = log_c + scaled_log(a, lF_u) + scaled_log(b, d.eval_log_sf(u)) + lf_u;
        if (lw < -745.0) return 0.0;
        // The inner factor (F(s)/F(u))^a decays on the scale F(u) / (a f(u)).
        double sc = d.scale;
        if (a > 0) sc = std::min(sc, std::exp(lF_u - lf_u) / a);
        if (!(sc > 0.0)) sc = d.scale;
        auto inner = [&](double s) {
            double const lf_s = d.eval_log_pdf(s);
            if (lf_s == -kInf) return 0.0;
            double const rel = scaled_log(a, d.eval_log_cdf(s) - lF_u);
            double const mid = 0.5 * (u + s) + shift;
            return mid * mid * std::exp(rel + lf_s);
        };
        double const J = integrate_peaked(inner, u, sc, inner_spec, -kInf, u).value;
        return std::exp(lw) * J;
    };
    auto const [center, scale] = order_stat_hint(d, N, i + 1);
    return integrate_peaked(outer, center, scale, quad).value;
}

std::vector<double> contamination_weights(int n, const ContaminationConfig& config) {
    double const p = config.r / std::sqrt(static_cast<double>(n));
    if (!(p < 1.0)) throw DomainError("r/sqrt(n) must be < 1");
    std::vector<double> w = binomial_pmf_range(n, p, thinning_threshold(n));
    if (config.renormalize_weights) {
        double s = 0.0;
        for (double x : w) s += x;
        for (double& x : w) x /= s;
    }
    return w;
}

RiskResult exact_mse_odd(const IdealDistribution& dist, const ContaminationConfig& config, int n,
                         const QuadratureSpec& quad, unsigned threads) {
    check_common(config, n);
    check_parity(n, MedianVariant::OddMedian);
    int const q = n / 2 + 1;
    auto const w = contamination_weights(n, config);
    auto sq = [](double t) { return t * t; };
    double const e = mixture(w, threads, [&](int k) {
        return contaminated_order_stat(dist, n, q, k, config, sq, quad);
    });
    return make_result(n * e, n, config.r, MedianVariant::OddMedian);
}

double midpoint_density_ideal(const IdealDistribution& d, int n, double t,
                              const QuadratureSpec& quad) {
    if (n < 2 || n % 2 == 1) throw ParityError("midpoint_density_ideal: n must be even and >= 2");
    int const m = n / 2;
    double const log_c = 2.0 * std::log(static_cast<double>(n)) + log_choose(n - 1, m);
    auto integrand = [&](double u) {
        double const s = 2.0 * t - u;
        double const lf = d.eval_log_pdf(u) + d.eval_log_pdf(s);
        if (lf == -kInf) return 0.0;
        double const lg = log_c + scaled_log(m - 1, d.eval_log_cdf(s) + d.eval_log_sf(u)) + lf;
        return std::exp(lg);
    };
    double const f = d.pdf(t);
    double const F = d.cdf(t);
    double sc = d.scale;
    if (m > 1 && f > 0.0) sc = std::min(sc, 1.0 / ((m - 1) * f * (1.0 / F + 1.0 / (1.0 - F))));
    if (!(sc > 0.0) || !std::isfinite(sc)) sc = d.scale;
    QuadratureSpec spec = quad;
    spec.abs_tol = DBL_MIN;
    return integrate_peaked(integrand, t, sc, spec, t, kInf).value;
}

RiskResult exact_mse_midpoint(const IdealDistribution& dist, const ContaminationConfig& config,
                              int n, const QuadratureSpec& quad, unsigned threads) {
    check_common(config, n);
    check_parity(n, MedianVariant::Midpoint);
    if (config.contamination_distance)
        throw UsageError("finite contamination points are not supported for the midpoint");
    int const m = n / 2;
    if (m == 1 && config.r == 0.0)  // n = 2 has a single ideal pair
        return make_result(n * consecutive_midpoint_second_moment(dist, 2, 1, quad), n, 0.0,
                           MedianVariant::Midpoint);
    auto const w = contamination_weights(n, config);
    bool const right = config.side == ContaminationSide::Right;
    double const e = mixture(w, threads, [&](int k) {
        return consecutive_midpoint_second_moment(dist, n - k, right ? m : m - k, quad);
    });
    return make_result(n * e, n, config.r, MedianVariant::Midpoint);
}

RiskResult exact_mse(const IdealDistribution& dist, const ContaminationConfig& config, int n,
                     MedianVariant variant, const QuadratureSpec& quad, unsigned threads) {
    check_common(config, n);
    check_parity(n, variant);
    int const m = n / 2;
    auto sq = [](double t) { return t * t; };
    auto quantile_risk = [&](int q, double shift) {
        auto const w = contamination_weights(n, config);
        auto wt = [shift](double t) { return (t + shift) * (t + shift); };
        std::function<double(double)> loss = shift == 0.0 ? std::function<double(double)>(sq)
                                                          : std::function<double(double)>(wt);
        return n * mixture(w, threads, [&](int k) {
                   return contaminated_order_stat(dist, n, q, k, config, loss, quad);
               });
    };
    switch (variant) {
        case MedianVariant::OddMedian:
            return exact_mse_odd(dist, config, n, quad, threads);
        case MedianVariant::Midpoint:
            return exact_mse_midpoint(dist, config, n, quad, threads);
        case MedianVariant::LowerQuantile:
            return make_result(quantile_risk(m, 0.0), n, config.r, variant);
        case MedianVariant::UpperQuantile:
            return make_result(quantile_risk(m + 1, 0.0), n, config.r, variant);
        case MedianVariant::Randomized:
            // The coin is independent of the data: average the two quantile risks.
            return make_result(0.5 * (quantile_risk(m, 0.0) + quantile_risk(m + 1, 0.0)), n,
                               config.r, variant);
        case MedianVariant::BiasCorrected:
            return make_result(quantile_risk(m, 1.0 / (2.0 * n * dist.f0)), n, config.r, variant);
    }
    throw UsageError("unknown variant");
}

RiskResult exact_mse_worst_side(const IdealDistribution& dist, ContaminationConfig config, int n,
                                MedianVariant variant, const QuadratureSpec& quad,
                                unsigned threads) {
    config.side = ContaminationSide::Right;
    RiskResult right = exact_mse(dist, config, n, variant, quad, threads);
    if (config.r == 0.0 || (dist.symmetric && variant != MedianVariant::LowerQuantile &&
                            variant != MedianVariant::UpperQuantile &&
                            variant != MedianVariant::BiasCorrected))
        return right;
    config.side = ContaminationSide::Left;
    RiskResult left = exact_mse(dist, config, n, variant, quad, threads);
    return left.value > right.value ? left : right;
}

RiskResult exact_mse_odd_one_point_at_zero(const IdealDistribution& dist,
                                           const ContaminationConfig& config, int n,
                                           const QuadratureSpec& quad) {
    check_common(config, n);
    check_parity(n, MedianVariant::OddMedian);
    int const q = n / 2 + 1;
    auto const w = contamination_weights(n, config);
    auto sq = [](double t) { return t * t; };
    bool const right = config.side == ContaminationSide::Right;
    double const e = mixture(w, 1, [&](int k) {
        int const N = n - k;
        if (k == 0) return integrate_order_stat(dist, N, q, sq, quad);
        // Counting observations <= t: the point at 0 adds one for t >= 0, the
        // k-1 far-left points add k-1 everywhere.
        int const base = right ? q : q - (k - 1);
        double const neg = integrate_order_stat(dist, N, base, sq, quad, -kInf, 0.0);
        double const pos = base - 1 >= 1 ? integrate_order_stat(dist, N, base - 1, sq, quad, 0.0, kInf)
                                         : 0.0;
        return neg + pos;
    });
    return make_result(n * e, n, config.r, MedianVariant::OddMedian);
}

ExactBiasVar exact_bias_var(const IdealDistribution& dist, const ContaminationConfig& config,
                            int n, const QuadratureSpec& quad) {
    check_common(config, n);
    auto const w = contamination_weights(n, config);
    auto id = [](double t) { return t; };
    auto sq = [](double t) { return t * t; };
    double e1 = 0.0, e2 = 0.0;
    if (n % 2 == 1) {
        int const q = n / 2 + 1;
        e1 = mixture(w, 1, [&](int k) { return contaminated_order_stat(dist, n, q, k, config, id, quad); });
        e2 = mixture(w, 1, [&](int k) { return contaminated_order_stat(dist, n, q, k, config, sq, quad); });
    } else {
        if (config.contamination_distance)
            throw UsageError("finite contamination points are not supported for the midpoint");
        int const m = n / 2;
        bool const right = config.side == ContaminationSide::Right;
        e1 = mixture(w, 1, [&](int k) {
            int const i = right ? m : m - k;
            return 0.5 * (integrate_order_stat(dist, n - k, i, id, quad) +
                          integrate_order_stat(dist, n - k, i + 1, id, quad));
        });
        e2 = mixture(w, 1, [&](int k) {
            return consecutive_midpoint_second_moment(dist, n - k, right ? m : m - k, quad);
        });
    }
    ExactBiasVar out;
    out.var = n * (e2 - e1 * e1);
    out.bias = std::sqrt(static_cast<double>(n)) * e1;
    out.bias_sq = n * e1 * e1;
    return out;
}

std::vector<std::pair<int, double>> relative_error_curve(const IdealDistribution& dist,
                                                         const ContaminationConfig& config,
                                                         std::span<const int> ns, AsyOrder order,
                                                         const VariantRule& rule,
                                                         const QuadratureSpec& quad,
                                                         unsigned threads) {
    if (ns.empty()) throw UsageError("relative_error_curve: empty n range");
    std::vector<std::pair<int, double>> out(ns.size());
    parallel_for(ns.size(), threads, [&](std::size_t idx) {
        int const n = ns[idx];
        MedianVariant const v = rule(n);
        double const exact = exact_mse(dist, config, n, v, quad).value;
        double const asy = asy_mse(dist, config.r, n, v, order).value;
        out[idx] = {n, (asy - exact) / exact};
    });
    return out;
}

std::vector<std::optional<int>> minimal_n_search_many(
    const IdealDistribution& dist, const ContaminationConfig& config,
    std::span<const MinimalNQuery> queries, int n_cap, int n_min, const VariantRule& rule,
    const QuadratureSpec& quad, unsigned threads) {
    if (n_cap < 2 || n_min < 1 || n_min > n_cap)
        throw UsageError("minimal_n_search: need 1 <= n_min <= n_cap and n_cap >= 2");
    for (auto const& q : queries)
        if (!(q.threshold > 0.0 && q.threshold < 1.0))
            throw UsageError("minimal_n_search: threshold must lie in (0, 1)");

    // n0 = 1 + (largest failing n), so scan downward from the cap and stop
    // once every query has seen a failure.
    std::vector<std::optional<int>> largest_fail(queries.size());
    std::size_t open = queries.size();
    int const block = static_cast<int>(std::max(1u, threads));
    for (int top = n_cap; top >= n_min && open > 0; top -= block) {
        int const bottom = std::max(n_min, top - block + 1);
        std::vector<int> ns;
        for (int n = top; n >= bottom; --n) ns.push_back(n);
        std::vector<double> exact(ns.size());
        parallel_for(ns.size(), threads, [&](std::size_t idx) {
            exact[idx] = exact_mse(dist, config, ns[idx], rule(ns[idx]), quad).value;
        });
        for (std::size_t idx = 0; idx < ns.size(); ++idx) {
            int const n = ns[idx];
            for (std::size_t qi = 0; qi < queries.size(); ++qi) {
                if (largest_fail[qi]) continue;
                double const asy = asy_mse(dist, config.r, n, rule(n), queries[qi].order).value;
                double const rel = std::fabs((asy - exact[idx]) / exact[idx]);
                if (!(rel < queries[qi].threshold)) {
                    largest_fail[qi] = n;
                    --open;
                }
            }
        }
    }
    std::vector<std::optional<int>> out(queries.size());
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        if (!largest_fail[qi])
            out[qi] = n_min;
        else if (*largest_fail[qi] < n_cap)
            out[qi] = *largest_fail[qi] + 1;
    }
    return out;
}

int minimal_n_search(const IdealDistribution& dist, const ContaminationConfig& config,
                     double threshold, AsyOrder order, int n_cap, int n_min,
                     const VariantRule& rule, const QuadratureSpec& quad, unsigned threads) {
    MinimalNQuery const q{threshold, order};
    auto const res = minimal_n_search_many(dist, config, std::span(&q, 1), n_cap, n_min, rule,
                                           quad, threads);
    if (!res[0])
        throw NotReached("relative error at n_cap = " + std::to_string(n_cap) +
                         " is not below the threshold");
    return *res[0];
}

}  // namespace medrisk
