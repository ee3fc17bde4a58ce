#include "medrisk/normal.hpp"

#include <cmath>
#include <limits>

namespace medrisk::normal {

namespace {

constexpr double kInvSqrt2 = 0.707106781186547524400844362105;

// Asymptotic expansion of log Phi(x) for x -> -inf:
// Phi(x) = phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...).
double log_cdf_far_left(double x) {
    double const z = 1.0 / (x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2.0 * k - 1.0) * z;
        sum += term;
    }
    return -0.5 * x * x - kLogSqrt2Pi - std::log(-x) + std::log(sum);
}

template <int N>
double poly(double const (&c)[N], double x) {
    double acc = c[N - 1];
    for (int i = N - 2; i >= 0; --i) acc = acc * x + c[i];
    return acc;
}

}  // namespace

double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double log_cdf(double x) {
    if (x < -35.0) return log_cdf_far_left(x);
    if (x < 0.0) return std::log(cdf(x));
    return std::log1p(-sf(x));
}

double log_sf(double x) { return log_cdf(-x); }

// Wichura's AS 241 (PPND16), followed by one Halley step against erfc.
double quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) return std::numeric_limits<double>::quiet_NaN();
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    static constexpr double a[8] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                                    1.9715909503065514427e+3, 1.3731693765509461125e+4,
                                    4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                    3.3430575583588128105e+4, 2.5090809287301226727e+3};
    static constexpr double b[8] = {1.0,
                                    4.2313330701600911252e+1, 6.8718700749205790830e+2,
                                    5.3941960214247511077e+3, 2.1213794301586595867e+4,
                                    3.9307895800092710610e+4, 2.8729085735721942674e+4,
                                    5.2264952788528545610e+3};
    static constexpr double c[8] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                    5.76949722146069140550e0, 3.64784832476320460504e0,
                                    1.27045825245236838258e0, 2.41780725177450611770e-1,
                                    2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {1.0,
                                    2.05319162663775882187e0,  1.67638483018380384940e0,
                                    6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                    1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                    1.05075007164441684324e-9};
    static constexpr double e[8] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                    1.78482653991729133580e0, 2.96560571828504891230e-1,
                                    2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                    2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {1.0,
                                    5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                    1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                    1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                    2.04426310338993978564e-15};

    double const q = p - 0.5;
    double x;
    if (std::fabs(q) <= 0.425) {
        double const r = 0.180625 - q * q;
        x = q * poly(a, r) / poly(b, r);
    } else {
        double r = q < 0.0 ? p : 1.0 - p;
        r = std::sqrt(-std::log(r));
        if (r <= 5.0) {
            r -= 1.6;
            x = poly(c, r) / poly(d, r);
        } else {
            r -= 5.0;
            x = poly(e, r) / poly(f, r);
        }
        if (q < 0.0) x = -x;
    }

    // Refine on whichever tail carries the relative information.
    double const err = x < 0.0 ? cdf(x) - p : (1.0 - p) - sf(x);
    double const dens = pdf(x);
    if (dens > 0.0 && std::isfinite(err)) {
        double const u = err / dens;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

}  // namespace medrisk::normal
