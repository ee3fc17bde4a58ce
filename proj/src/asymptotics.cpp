#include "medrisk/asymptotics.hpp"

#include <cmath>
#include <string>

#include "medrisk/errors.hpp"
#include "medrisk/normal.hpp"

namespace medrisk {

std::string_view to_string(MedianVariant v) {
    switch (v) {
        case MedianVariant::OddMedian: return "odd";
        case MedianVariant::LowerQuantile: return "lower";
        case MedianVariant::UpperQuantile: return "upper";
        case MedianVariant::Randomized: return "randomized";
        case MedianVariant::Midpoint: return "midpoint";
        case MedianVariant::BiasCorrected: return "biascorrected";
    }
    return "?";
}

std::optional<MedianVariant> parse_variant(std::string_view s) {
    if (s == "odd" || s == "median") return MedianVariant::OddMedian;
    if (s == "lower" || s == "lowerquantile") return MedianVariant::LowerQuantile;
    if (s == "upper" || s == "upperquantile") return MedianVariant::UpperQuantile;
    if (s == "randomized" || s == "random") return MedianVariant::Randomized;
    if (s == "midpoint" || s == "mid") return MedianVariant::Midpoint;
    if (s == "biascorrected" || s == "bias-corrected") return MedianVariant::BiasCorrected;
    return std::nullopt;
}

bool requires_odd_n(MedianVariant v) { return v == MedianVariant::OddMedian; }

void check_parity(int n, MedianVariant v) {
    if (n < 1) throw UsageError("sample size must be >= 1, got " + std::to_string(n));
    bool const odd = n % 2 == 1;
    if (odd != requires_odd_n(v))
        throw ParityError("variant '" + std::string(to_string(v)) + "' requires " +
                          (requires_odd_n(v) ? "odd" : "even") + " n, got n = " + std::to_string(n));
}

MedianVariant default_variant_for(int n) {
    return n % 2 == 1 ? MedianVariant::OddMedian : MedianVariant::Midpoint;
}

std::string_view to_string(RiskMethod m) {
    switch (m) {
        case RiskMethod::Asy0: return "asy0";
        case RiskMethod::AsyHalf: return "asy-half";
        case RiskMethod::AsyOne: return "asy1";
        case RiskMethod::ExactQuadrature: return "exact";
        case RiskMethod::Simulated: return "sim";
    }
    return "?";
}

RiskMethod method_for(AsyOrder o) {
    switch (o) {
        case AsyOrder::Zero: return RiskMethod::Asy0;
        case AsyOrder::Half: return RiskMethod::AsyHalf;
        case AsyOrder::One: return RiskMethod::AsyOne;
    }
    return RiskMethod::AsyOne;
}

std::optional<AsyOrder> parse_order(std::string_view s) {
    if (s == "0" || s == "asy0" || s == "zero" || s == "first") return AsyOrder::Zero;
    if (s == "half" || s == "asy-half" || s == "second") return AsyOrder::Half;
    if (s == "one" || s == "1" || s == "asy1" || s == "third") return AsyOrder::One;
    return std::nullopt;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

double ExpansionCoefficients::half_order_bundle(const IdealDistribution& d) const {
    return a10 + a11 * d.f1 / (d.f0 * d.f0);
}

double ExpansionCoefficients::first_order_bundle(const IdealDistribution& d) const {
    double const f02 = d.f0 * d.f0;
    return a20() + a21() * d.f1 / f02 + a22() * d.f2 / (f02 * d.f0) +
           a23 * d.f1 * d.f1 / (f02 * f02);
}

namespace {

void check_radius(double r) {
    if (!(r >= 0.0)) throw NegativeRadius(r);
}

// Contaminate on the side where the density falls off: f1 < 0 -> right.
WorstSide side_from_f1(double f1) {
    return static_cast<WorstSide>(-sign_of(f1));
}

// Terms shared by every variant.
void fill_common(ExpansionCoefficients& c, double r) {
    double const r2 = r * r, r4 = r2 * r2;
    c.r = r;
    c.a23 = 5.0 * (r4 + 6.0 * r2 + 3.0) / 16.0;
    c.a22c = -0.25;
    c.a22r = -(r4 + 6.0 * r2) / 12.0;
}

}  // namespace

ExpansionCoefficients coefficients_odd(const IdealDistribution& dist, double r) {
    check_radius(r);
    ExpansionCoefficients c;
    fill_common(c, r);
    double const r2 = r * r, r4 = r2 * r2;
    int const sg = sign_of(dist.f1);
    c.variant = MedianVariant::OddMedian;
    c.a10 = 2.0 * (1.0 + r2);
    c.a11 = (r2 + 3.0) * sg / 2.0;
    c.a20c = -2.0;
    c.a20r = 3.0 * r2 + 3.0 * r4;
    c.a21c = 0.0;
    c.a21r = 3.0 * r2 * (3.0 + r2) * sg / 2.0;
    c.side = side_from_f1(dist.f1);
    return c;
}

ExpansionCoefficients coefficients_even(const IdealDistribution& dist, double r,
                                        MedianVariant variant) {
    check_radius(r);
    if (variant == MedianVariant::OddMedian)
        throw ParityError("coefficients_even: the odd median has no even-n expansion");
    ExpansionCoefficients c;
    fill_common(c, r);
    c.variant = variant;
    double const r2 = r * r, r4 = r2 * r2;
    int const sg = sign_of(dist.f1);

    switch (variant) {
        case MedianVariant::LowerQuantile:
        case MedianVariant::UpperQuantile: {
            c.s_prime = variant == MedianVariant::LowerQuantile ? 1 : -1;
            double const f02 = dist.f0 * dist.f0;
            double const arg = (3.0 + r2) * dist.f1 + c.s_prime * 4.0 * f02;
            // Exact ties are what matters; tiny residues from rounding count as ties.
            c.s = std::fabs(arg) <= 1e-14 * (4.0 * f02) ? 0 : sign_of(arg);
            double const ss = c.s_prime * c.s;
            c.a10 = 2.0 + 2.0 * ss + 2.0 * r2;
            c.a11 = (r2 + 3.0) * c.s / 2.0;
            c.a20c = -1.0;
            c.a20r = 3.0 * r4 + (3.0 + 4.0 * ss) * r2;
            c.a21c = 1.5 * c.s_prime;
            c.a21r = 3.0 * c.s * ((3.0 + ss) * r2 + r4) / 2.0;
            c.side = c.s > 0 ? WorstSide::Left : (c.s < 0 ? WorstSide::Right : WorstSide::Either);
            break;
        }
        case MedianVariant::Randomized:
        case MedianVariant::Midpoint:
        case MedianVariant::BiasCorrected: {
            c.a10 = 2.0 * (1.0 + r2);
            c.a11 = (r2 + 3.0) * sg / 2.0;
            c.a20r = 3.0 * r4 + 3.0 * r2;
            c.a21c = 0.0;
            c.a21r = 3.0 * r2 * (3.0 + r2) * sg / 2.0;
            if (variant == MedianVariant::Midpoint) c.a20c = -3.0;
            if (variant == MedianVariant::Randomized) c.a20c = -1.0;
            if (variant == MedianVariant::BiasCorrected) {
                c.a20c = -2.0;
                c.a20r += 2.0 * r2 * sg;
                c.a21c = 1.0;
                c.a21r += r2;
            }
            c.side = side_from_f1(dist.f1);
            break;
        }
        case MedianVariant::OddMedian:
            break;
    }
    return c;
}

ExpansionCoefficients coefficients(const IdealDistribution& dist, double r, MedianVariant variant) {
    return variant == MedianVariant::OddMedian ? coefficients_odd(dist, r)
                                               : coefficients_even(dist, r, variant);
}

RiskResult asy_mse(const IdealDistribution& dist, double r, int n, MedianVariant variant,
                   AsyOrder order) {
    check_radius(r);
    check_parity(n, variant);
    ExpansionCoefficients const c = coefficients(dist, r, variant);
    double const nn = n;
    double bracket = 1.0 + r * r;
    if (order != AsyOrder::Zero) bracket += r / std::sqrt(nn) * c.half_order_bundle(dist);
    if (order == AsyOrder::One) bracket += c.first_order_bundle(dist) / nn;
    RiskResult out;
    out.value = bracket / (4.0 * dist.f0 * dist.f0);
    out.method = method_for(order);
    out.n = n;
    out.r = r;
    out.variant = variant;
    return out;
}

BiasVarExpansion bias_var_expansion(const IdealDistribution& dist, double r, int n) {
    check_radius(r);
    if (n < 1) throw UsageError("bias_var_expansion: n must be >= 1");
    double const f0 = dist.f0, f02 = f0 * f0;
    double const g1 = std::fabs(dist.f1) / f02;       // |f1|/f0^2
    double const g2 = dist.f2 / (f02 * f0);            // f2/f0^3
    double const g11 = dist.f1 * dist.f1 / (f02 * f02);  // f1^2/f0^4
    double const r2 = r * r, r4 = r2 * r2;
    double const sn = std::sqrt(static_cast<double>(n));
    double const nn = n;
    // 2 for odd n (odd median), 3 for even n (midpoint).
    double const parity = n % 2 == 1 ? 2.0 : 3.0;

    BiasVarExpansion out;
    out.var = (1.0 + r / sn * (2.0 + g1) +
               (3.0 * r2 - parity + 3.0 * g1 * r2 - g2 * (r2 + 1.0) / 4.0 +
                g11 * (8.0 * r2 + 7.0) / 8.0) / nn) /
              (4.0 * f02);
    out.abs_bias = (r + (r2 + g1 * (r2 + 1.0) / 4.0) / sn +
                    r / nn * (r2 + g1 * (r2 + 1.0) / 2.0 - g2 * (r2 + 3.0) / 24.0 +
                              g11 * (r2 + 3.0) / 8.0)) /
                   (2.0 * f0);
    out.bias_sq = (r2 + r / sn * (2.0 * r2 + g1 * (r2 + 1.0) / 2.0) +
                   (3.0 * r4 + 1.5 * g1 * r2 * (r2 + 1.0) - g2 * r2 * (r2 + 3.0) / 12.0 +
                    g11 * (5.0 * r4 + 14.0 * r2 + 1.0) / 16.0) / nn) /
                  (4.0 * f02);
    return out;
}

RiskResult normal_specialization(double r, int n, MedianVariant variant, AsyOrder order) {
    static IdealDistribution const normal = make_normal();
    return asy_mse(normal, r, n, variant, order);
}

}  // namespace medrisk
