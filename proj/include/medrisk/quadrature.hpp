#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

namespace medrisk {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_subdivisions = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    std::size_t subdivisions = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature over [a, b].
///
/// The interval is first split at `breakpoints` (sorted, values outside
/// (a, b) are ignored), then the sub-interval with the largest error estimate
/// is bisected until the total error is below max(abs_tol, rel_tol * |I|).
/// Throws QuadratureFailure when max_subdivisions is exhausted first, and
/// UsageError for infinite limits.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                           std::span<const double> breakpoints = {});

/// Integral of a unimodal-ish integrand over the real line (or a half line).
///
/// Starting from `center`, the domain is explored outward in steps
/// center +- scale * 2^k until the integrand falls below `cut` times the
/// largest value seen, or until `lo` / `hi` is reached. The visited points
/// become breakpoints, so narrow peaks are never skipped.
QuadratureResult integrate_peaked(const Integrand& f, double center, double scale,
                                  const QuadratureSpec& spec, double lo = -std::numeric_limits<double>::infinity(),
                                  double hi = std::numeric_limits<double>::infinity(), double cut = 1e-17);

}  // namespace medrisk
