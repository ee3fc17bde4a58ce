#pragma once

// Standard normal special functions with relative accuracy in both tails.

namespace medrisk::normal {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

double pdf(double x);
double log_pdf(double x);

/// Lower tail probability, Phi(x).
double cdf(double x);

/// Upper tail probability, 1 - Phi(x), without cancellation.
double sf(double x);

/// log Phi(x); finite for every finite x.
double log_cdf(double x);

/// log(1 - Phi(x)).
double log_sf(double x);

/// Inverse of cdf on (0, 1); -inf / +inf at the endpoints.
double quantile(double p);

}  // namespace medrisk::normal
