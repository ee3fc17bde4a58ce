#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "medrisk/distributions.hpp"

namespace medrisk {

/// Location estimators built from the central order statistics.
/// OddMedian applies to odd n only, the others to even n = 2m.
enum class MedianVariant {
    OddMedian,      ///< X_[m+1:2m+1]
    LowerQuantile,  ///< X_[m:2m]
    UpperQuantile,  ///< X_[m+1:2m]
    Randomized,     ///< fair-coin choice between the two central order statistics
    Midpoint,       ///< average of the two central order statistics
    BiasCorrected,  ///< X_[m:2m] + 1/(2 n f0)
};

std::string_view to_string(MedianVariant v);
/// Accepts the names printed by to_string plus the CLI aliases
/// odd, lower, upper, randomized, midpoint, biascorrected.
std::optional<MedianVariant> parse_variant(std::string_view s);
bool requires_odd_n(MedianVariant v);
/// Throws ParityError when n's parity does not fit the variant.
void check_parity(int n, MedianVariant v);
/// The rule used by the tables: odd n -> OddMedian, even n -> Midpoint.
MedianVariant default_variant_for(int n);

/// Contamination side: -1 all mass far left, +1 far right, 0 either.
enum class WorstSide : int { Left = -1, Either = 0, Right = 1 };

/// Coefficients of the risk expansion for one estimator and radius,
///   n MSE = 1/(4 f0^2) [ (1+r^2) + r/sqrt(n) (a10 + a11 f1/f0^2)
///            + 1/n (a20 + a21 f1/f0^2 + a22 f2/f0^3 + a23 f1^2/f0^4) ],
/// with a2j = a2jc + a2jr split into ideal-model (c) and contamination (r) parts.
struct ExpansionCoefficients {
    MedianVariant variant = MedianVariant::OddMedian;
    double r = 0.0;
    double a10 = 0.0, a11 = 0.0;
    double a20c = 0.0, a20r = 0.0;
    double a21c = 0.0, a21r = 0.0;
    double a22c = 0.0, a22r = 0.0;
    double a23 = 0.0;
    WorstSide side = WorstSide::Either;
    int s_prime = 0;  ///< +1 lower quantile, -1 upper quantile, 0 otherwise
    int s = 0;        ///< sign((3+r^2) f1 + s' 4 f0^2) for the quantiles, 0 otherwise

    double a20() const { return a20c + a20r; }
    double a21() const { return a21c + a21r; }
    double a22() const { return a22c + a22r; }
    /// a10 + a11 f1/f0^2.
    double half_order_bundle(const IdealDistribution& d) const;
    /// a20 + a21 f1/f0^2 + a22 f2/f0^3 + a23 f1^2/f0^4.
    double first_order_bundle(const IdealDistribution& d) const;
};

enum class RiskMethod { Asy0, AsyHalf, AsyOne, ExactQuadrature, Simulated };
std::string_view to_string(RiskMethod m);

/// Truncation order of the expansion: n^0, n^{-1/2}, n^{-1}.
enum class AsyOrder { Zero, Half, One };
RiskMethod method_for(AsyOrder o);
std::optional<AsyOrder> parse_order(std::string_view s);

/// A value of n * MSE together with how it was obtained.
struct RiskResult {
    double value = 0.0;
    RiskMethod method = RiskMethod::AsyOne;
    std::optional<std::pair<double, double>> ci;  ///< Simulated only
    int n = 0;
    double r = 0.0;
    MedianVariant variant = MedianVariant::OddMedian;
};

/// sign with sign(0) = 0.
int sign_of(double x);

ExpansionCoefficients coefficients_odd(const IdealDistribution& dist, double r);
ExpansionCoefficients coefficients_even(const IdealDistribution& dist, double r,
                                        MedianVariant variant);
/// Dispatches on the variant.
ExpansionCoefficients coefficients(const IdealDistribution& dist, double r, MedianVariant variant);

/// Maximal n * MSE on the thinned shrinking neighborhood, truncated at `order`.
RiskResult asy_mse(const IdealDistribution& dist, double r, int n, MedianVariant variant,
                   AsyOrder order);

struct BiasVarExpansion {
    double var = 0.0;       ///< n Var
    double abs_bias = 0.0;  ///< sqrt(n) |Bias|
    double bias_sq = 0.0;   ///< n Bias^2
};

/// Separate variance and bias expansions through order 1/n for the odd
/// median (odd n) and the midpoint estimator (even n) under the
/// risk-maximizing contamination.
BiasVarExpansion bias_var_expansion(const IdealDistribution& dist, double r, int n);

/// asy_mse for F = N(0,1).
RiskResult normal_specialization(double r, int n, MedianVariant variant, AsyOrder order);

}  // namespace medrisk
