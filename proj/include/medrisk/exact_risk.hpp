#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "medrisk/asymptotics.hpp"
#include "medrisk/distributions.hpp"
#include "medrisk/quadrature.hpp"

namespace medrisk {

enum class ContaminationSide { Left, Right };

/// Worst-case member of the thinned shrinking neighborhood.
///
/// Each observation is contaminated with probability r/sqrt(n); samples with
/// more than thinning_threshold(n) = ceil(n/2) - 1 contaminated observations
/// are excluded. All contaminating mass sits beyond the reach of the
/// integrals on `side`, or at the Dirac point +-contamination_distance when
/// that is set.
struct ContaminationConfig {
    double r = 0.0;
    ContaminationSide side = ContaminationSide::Right;
    /// Divide binomial weights by P(K <= threshold), the conditional law.
    bool renormalize_weights = true;
    std::optional<double> contamination_distance;
};

/// Density of X_[k:n] under F, evaluated in log space.
double order_stat_density(const IdealDistribution& dist, int n, int k, double t);

/// Conditional density of the median of n = 2m+1 observations given that k
/// are contaminated and j of those lie below t:
///   (n-k) C(2m-k, m-j) F(t)^(m-j) (1-F(t))^(m+j-k) f(t).
/// j = 0 for every t is contamination far right, j = k far left.
double contaminated_density(const IdealDistribution& dist, int n, int j, int k, double t);

/// E[w(X_[i:N])] under F.
double order_stat_expectation(const IdealDistribution& dist, int N, int i,
                              const std::function<double(double)>& w, const QuadratureSpec& quad);

/// E[((X_[i:N] + X_[i+1:N]) / 2 + shift)^2] under F by nested quadrature.
double consecutive_midpoint_second_moment(const IdealDistribution& dist, int N, int i,
                                          const QuadratureSpec& quad, double shift = 0.0);

/// Binomial(n, r/sqrt n) weights for k = 0..thinning_threshold(n).
std::vector<double> contamination_weights(int n, const ContaminationConfig& config);

RiskResult exact_mse_odd(const IdealDistribution& dist, const ContaminationConfig& config, int n,
                         const QuadratureSpec& quad = {}, unsigned threads = 1);

/// Density of the midpoint estimator for even n in the ideal model.
double midpoint_density_ideal(const IdealDistribution& dist, int n, double t,
                              const QuadratureSpec& quad = {});

RiskResult exact_mse_midpoint(const IdealDistribution& dist, const ContaminationConfig& config,
                              int n, const QuadratureSpec& quad = {}, unsigned threads = 1);

/// n * MSE for any variant; Randomized is the average of the two quantile
/// risks, BiasCorrected shifts the lower quantile by 1/(2 n f0).
RiskResult exact_mse(const IdealDistribution& dist, const ContaminationConfig& config, int n,
                     MedianVariant variant, const QuadratureSpec& quad = {}, unsigned threads = 1);

/// max of exact_mse over both contamination sides.
RiskResult exact_mse_worst_side(const IdealDistribution& dist, ContaminationConfig config, int n,
                                MedianVariant variant, const QuadratureSpec& quad = {},
                                unsigned threads = 1);

/// Odd-median risk when, given K = k >= 1, one contaminated point sits at 0
/// and the remaining k-1 are placed as in `config` (infinite distance).
RiskResult exact_mse_odd_one_point_at_zero(const IdealDistribution& dist,
                                           const ContaminationConfig& config, int n,
                                           const QuadratureSpec& quad = {});

struct ExactBiasVar {
    double var = 0.0;       ///< n Var
    double bias = 0.0;      ///< sqrt(n) E[estimate]
    double bias_sq = 0.0;   ///< n Bias^2
};

/// Exact bias and variance of the odd median (odd n) or the midpoint (even n).
ExactBiasVar exact_bias_var(const IdealDistribution& dist, const ContaminationConfig& config,
                            int n, const QuadratureSpec& quad = {});

using VariantRule = std::function<MedianVariant(int)>;

/// (n, (asy - exact) / exact) for every n, with variant chosen by `rule`.
std::vector<std::pair<int, double>> relative_error_curve(
    const IdealDistribution& dist, const ContaminationConfig& config, std::span<const int> ns,
    AsyOrder order, const VariantRule& rule = default_variant_for, const QuadratureSpec& quad = {},
    unsigned threads = 1);

struct MinimalNQuery {
    double threshold = 0.01;
    AsyOrder order = AsyOrder::One;
};

/// Smallest n0 in [n_min, n_cap] such that |relative error| < threshold for
/// every n in [n0, n_cap]; both parities are scanned. Throws NotReached when
/// n_cap itself fails.
int minimal_n_search(const IdealDistribution& dist, const ContaminationConfig& config,
                     double threshold, AsyOrder order, int n_cap, int n_min = 2,
                     const VariantRule& rule = default_variant_for, const QuadratureSpec& quad = {},
                     unsigned threads = 1);

/// Several (threshold, order) queries sharing one downward scan of exact
/// values; nullopt marks a query that failed at n_cap.
std::vector<std::optional<int>> minimal_n_search_many(
    const IdealDistribution& dist, const ContaminationConfig& config,
    std::span<const MinimalNQuery> queries, int n_cap, int n_min = 2,
    const VariantRule& rule = default_variant_for, const QuadratureSpec& quad = {},
    unsigned threads = 1);

}  // namespace medrisk
