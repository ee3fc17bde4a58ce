#pragma once

#include <functional>
#include <string>
#include <vector>

namespace medrisk {

/// Ideal central distribution F of the location model, centred at its median.
///
/// F is carried as a set of callables plus the Taylor coefficients of its
/// density at 0. The coefficients are supplied, never derived; validate()
/// cross-checks them against finite differences of pdf.
struct IdealDistribution {
    std::string name;
    std::function<double(double)> cdf;
    std::function<double(double)> pdf;
    std::function<double(double)> quantile;
    /// Optional tail-accurate logarithms. When empty, std::log of cdf/pdf is used.
    std::function<double(double)> log_cdf;
    std::function<double(double)> log_sf;
    std::function<double(double)> log_pdf;

    double f0 = 0.0;  ///< density at the median
    double f1 = 0.0;  ///< first derivative of the density at the median
    double f2 = 0.0;  ///< second derivative of the density at the median
    /// Exponent of the attested moment condition, int |x|^delta dF < inf.
    double moment_exponent_delta = 0.5;
    /// Characteristic width; finite-difference steps are h = 1e-4 * scale.
    double scale = 1.0;
    /// Declares F(-t) = 1 - F(t), which lets callers skip mirrored computations.
    bool symmetric = false;

    double eval_log_cdf(double t) const;
    double eval_log_sf(double t) const;
    double eval_log_pdf(double t) const;
};

/// F = N(0,1).
IdealDistribution make_normal();

/// Gumbel (maximum) law shifted so that its median is 0; a skewed model with
/// f1 < 0 and closed-form cdf/pdf/quantile, used to exercise asymmetric paths.
IdealDistribution make_gumbel_median();

/// Normal law with location `shift` but otherwise the N(0,1) Taylor data.
/// Not median-centred unless shift == 0; useful for exercising validate().
IdealDistribution make_shifted_normal(double shift);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double residual = 0.0;   ///< measured deviation
    double tolerance = 0.0;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_passed() const;
    const ValidationCheck* find(const std::string& name) const;
};

/// Checks the invariants F(0) = 1/2, f0 > 0, quantile/cdf consistency,
/// pdf vs. derivative of cdf, and supplied f1/f2 vs. finite differences.
///
/// Throws NonMedianCentered when |F(0) - 1/2| > 1e-8 and InvalidDensity when
/// f0 <= 0. Softer mismatches show up as failed checks in the report.
ValidationReport validate(const IdealDistribution& dist);

}  // namespace medrisk
