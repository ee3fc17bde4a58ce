#include <doctest.h>

#include <cmath>
#include <numbers>

#include "medrisk/asymptotics.hpp"
#include "medrisk/errors.hpp"

using namespace medrisk;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr MedianVariant kEven[] = {MedianVariant::LowerQuantile, MedianVariant::UpperQuantile,
                                   MedianVariant::Randomized, MedianVariant::Midpoint,
                                   MedianVariant::BiasCorrected};
}  // namespace

TEST_CASE("variant names and parity") {
    for (auto v : kEven) CHECK(parse_variant(to_string(v)) == v);
    CHECK(parse_variant("odd") == MedianVariant::OddMedian);
    CHECK_FALSE(parse_variant("mean"));
    CHECK_THROWS_AS(check_parity(4, MedianVariant::OddMedian), ParityError);
    CHECK_THROWS_AS(check_parity(5, MedianVariant::Midpoint), WrongParity);
    CHECK(default_variant_for(7) == MedianVariant::OddMedian);
    CHECK(default_variant_for(8) == MedianVariant::Midpoint);
    CHECK(parse_order("asy-half") == AsyOrder::Half);
    CHECK(to_string(RiskMethod::ExactQuadrature) == "exact");
}

TEST_CASE("odd-median coefficients for the normal model") {
    auto const d = make_normal();
    auto c0 = coefficients_odd(d, 0.0);
    CHECK(c0.half_order_bundle(d) == doctest::Approx(2.0));
    CHECK(c0.first_order_bundle(d) == doctest::Approx(-2.0 + kPi / 2.0).epsilon(1e-14));
    CHECK(c0.first_order_bundle(d) == doctest::Approx(-0.4292).epsilon(1e-4));
    auto c1 = coefficients_odd(d, 1.0);
    CHECK(c1.half_order_bundle(d) == doctest::Approx(4.0));
    CHECK(c1.first_order_bundle(d) == doctest::Approx(4.0 + 5.0 * kPi / 3.0).epsilon(1e-14));
    CHECK(c1.side == WorstSide::Either);
    CHECK_THROWS_AS(coefficients_odd(d, -0.1), NegativeRadius);
}

TEST_CASE("terms shared by every variant") {
    auto const d = make_gumbel_median();
    for (double r : {0.0, 0.3, 1.0}) {
        double const r2 = r * r, r4 = r2 * r2;
        for (auto v : {MedianVariant::OddMedian, MedianVariant::LowerQuantile, MedianVariant::UpperQuantile,
                       MedianVariant::Randomized, MedianVariant::Midpoint, MedianVariant::BiasCorrected}) {
            auto const c = coefficients(d, r, v);
            CHECK(c.a22c == -0.25);
            CHECK(c.a22r == doctest::Approx(-(r4 + 6 * r2) / 12.0));
            CHECK(c.a23 == doctest::Approx(5.0 * (r4 + 6 * r2 + 3) / 16.0));
        }
    }
    CHECK(coefficients_even(d, 0.5, MedianVariant::Midpoint).a20c == -3.0);
    CHECK(coefficients_even(d, 0.5, MedianVariant::BiasCorrected).a20c == -2.0);
    CHECK(coefficients_even(d, 0.5, MedianVariant::Randomized).a20c == -1.0);
    CHECK(coefficients_even(d, 0.5, MedianVariant::LowerQuantile).a20c == -1.0);
    CHECK_THROWS_AS(coefficients_even(d, 0.5, MedianVariant::OddMedian), ParityError);
}

TEST_CASE("even-n coefficients for the normal model") {
    auto const d = make_normal();
    for (double r : {0.0, 0.5, 1.0}) {
        auto const c = coefficients_even(d, r, MedianVariant::Midpoint);
        CHECK(c.a10 == doctest::Approx(2.0 * (1.0 + r * r)));
        CHECK(c.half_order_bundle(d) == doctest::Approx(c.a10));
    }
    CHECK(coefficients_even(d, 1.0, MedianVariant::Midpoint).a20() == doctest::Approx(3.0));

    auto const lo = coefficients_even(d, 0.0, MedianVariant::LowerQuantile);
    CHECK(lo.s_prime == 1);
    CHECK(lo.s == 1);
    CHECK(lo.a10 == doctest::Approx(4.0));
    CHECK(lo.side == WorstSide::Left);
    auto const up = coefficients_even(d, 0.0, MedianVariant::UpperQuantile);
    CHECK(up.s_prime == -1);
    CHECK(up.s == -1);
    CHECK(up.side == WorstSide::Right);
    // r = 0 quantile risk is 1.5708 (1 + 0.5708 / n).
    CHECK(lo.first_order_bundle(d) == doctest::Approx(kPi / 2.0 - 1.0).epsilon(1e-14));
}

TEST_CASE("quantile sign rule on a skewed model") {
    auto const g = make_gumbel_median();
    // 4 f0^2 = 0.48 and -(3 + r^2) f1 grows with r: the lower quantile flips side.
    CHECK(coefficients_even(g, 0.25, MedianVariant::LowerQuantile).side == WorstSide::Left);
    CHECK(coefficients_even(g, 2.0, MedianVariant::LowerQuantile).side == WorstSide::Right);
    CHECK(coefficients_even(g, 0.25, MedianVariant::UpperQuantile).side == WorstSide::Right);
    // Other variants contaminate on the side where the density falls off.
    CHECK(coefficients_odd(g, 0.5).side == WorstSide::Right);
    CHECK(coefficients_even(g, 0.5, MedianVariant::Midpoint).side == WorstSide::Right);

    // Degenerate point 4 f0^2 = -(3 + r^2) f1 for the lower quantile.
    auto tie = make_normal();
    tie.f1 = -4.0 * tie.f0 * tie.f0 / 3.0;
    auto const c = coefficients_even(tie, 0.0, MedianVariant::LowerQuantile);
    CHECK(c.s == 0);
    CHECK(c.side == WorstSide::Either);
}

TEST_CASE("upper quantile mirrors the lower quantile") {
    auto const g = make_gumbel_median();
    auto mirrored = g;
    mirrored.f1 = -g.f1;
    for (double r : {0.0, 0.25, 1.0, 2.0})
        for (int n : {10, 100}) {
            double const up = asy_mse(g, r, n, MedianVariant::UpperQuantile, AsyOrder::One).value;
            double const lo = asy_mse(mirrored, r, n, MedianVariant::LowerQuantile, AsyOrder::One).value;
            CHECK(up == doctest::Approx(lo).epsilon(1e-14));
        }
}

TEST_CASE("asy_mse reference values") {
    auto const d = make_normal();
    CHECK(asy_mse(d, 1.0, 5, MedianVariant::OddMedian, AsyOrder::One).value == doctest::Approx(8.853).epsilon(1e-4));
    CHECK(asy_mse(d, 0.5, 5, MedianVariant::OddMedian, AsyOrder::One).value == doctest::Approx(3.258).epsilon(2e-4));
    CHECK(asy_mse(d, 1.0, 100, MedianVariant::Midpoint, AsyOrder::One).value == doctest::Approx(3.899).epsilon(2e-4));
    for (int n : {5, 6, 101})
        CHECK(asy_mse(d, 0.0, n, default_variant_for(n), AsyOrder::Zero).value == doctest::Approx(1.5708).epsilon(1e-4));
    auto const res = asy_mse(d, 0.5, 5, MedianVariant::OddMedian, AsyOrder::Half);
    CHECK(res.method == RiskMethod::AsyHalf);
    CHECK(res.value == doctest::Approx(2.842).epsilon(2e-4));
    CHECK_THROWS_AS(asy_mse(d, 0.5, 6, MedianVariant::OddMedian, AsyOrder::One), ParityError);
    CHECK_THROWS_AS(asy_mse(d, -1.0, 5, MedianVariant::OddMedian, AsyOrder::One), NegativeRadius);
}

TEST_CASE("midpoint beats randomized by 2 / (4 f0^2 n)") {
    for (auto const& d : {make_normal(), make_gumbel_median()})
        for (double r : {0.0, 0.5, 1.0})
            for (int n : {6, 10, 100}) {
                double const gap = asy_mse(d, r, n, MedianVariant::Randomized, AsyOrder::One).value -
                                   asy_mse(d, r, n, MedianVariant::Midpoint, AsyOrder::One).value;
                CHECK(gap == doctest::Approx(2.0 / (4.0 * d.f0 * d.f0 * n)).epsilon(1e-12));
            }
}

TEST_CASE("normal closed forms") {
    auto coef = [](MedianVariant v, int n) {
        double const val = normal_specialization(0.0, n, v, AsyOrder::One).value;
        return (val / (kPi / 2.0) - 1.0) * n;
    };
    CHECK(coef(MedianVariant::OddMedian, 11) == doctest::Approx(-0.4292).epsilon(1e-4));
    CHECK(coef(MedianVariant::BiasCorrected, 10) == doctest::Approx(-0.4292).epsilon(1e-4));
    CHECK(coef(MedianVariant::LowerQuantile, 10) == doctest::Approx(0.5708).epsilon(1e-4));
    CHECK(coef(MedianVariant::Randomized, 10) == doctest::Approx(0.5708).epsilon(1e-4));
    CHECK(coef(MedianVariant::Midpoint, 10) == doctest::Approx(-1.4292).epsilon(1e-4));
}

TEST_CASE("bias and variance add up to the risk") {
    auto const d = make_normal();
    auto const b0 = bias_var_expansion(d, 0.0, 101);
    CHECK(b0.abs_bias == 0.0);
    CHECK(b0.bias_sq == 0.0);
    CHECK(b0.var == doctest::Approx(asy_mse(d, 0.0, 101, MedianVariant::OddMedian, AsyOrder::One).value).epsilon(1e-14));

    auto const b1 = bias_var_expansion(d, 1.0, 100);
    CHECK(std::fabs(b1.var + b1.bias_sq - asy_mse(d, 1.0, 100, MedianVariant::Midpoint, AsyOrder::One).value) < 1e-12);

    auto const g = make_gumbel_median();
    for (double r : {0.0, 0.5, 1.0})
        for (int n : {51, 52, 1000, 1001}) {
            auto const b = bias_var_expansion(g, r, n);
            double const asy = asy_mse(g, r, n, default_variant_for(n), AsyOrder::One).value;
            CHECK(std::fabs(b.var + b.bias_sq - asy) < 1e-12);
            CHECK(b.abs_bias >= 0.0);
        }
}
