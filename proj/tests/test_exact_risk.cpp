#include <doctest.h>

#include <cmath>
#include <vector>

#include "medrisk/errors.hpp"
#include "medrisk/exact_risk.hpp"

using namespace medrisk;

namespace {

double total_mass(const std::function<double(double)>& density, double scale = 1.0) {
    return integrate_peaked(density, 0.0, scale, QuadratureSpec{}).value;
}

ContaminationConfig radius(double r, ContaminationSide side = ContaminationSide::Right) {
    ContaminationConfig c;
    c.r = r;
    c.side = side;
    return c;
}

}  // namespace

TEST_CASE("order-statistic densities integrate to one") {
    auto const d = make_normal();
    for (int n : {1, 2, 5, 40, 401})
        for (int k : {1, (n + 1) / 2, n}) {
            INFO("n=" << n << " k=" << k);
            double const m = total_mass([&](double t) { return order_stat_density(d, n, k, t); }, 0.3);
            CHECK(std::fabs(m - 1.0) < 1e-8);
        }
    CHECK_THROWS_AS(order_stat_density(d, 5, 0, 0.0), IndexOutOfRange);
    CHECK_THROWS_AS(order_stat_density(d, 5, 6, 0.0), IndexOutOfRange);
}

TEST_CASE("contaminated densities integrate to one") {
    auto const g = make_gumbel_median();
    for (int n : {5, 11}) {
        int const m = n / 2;
        for (int k = 0; k <= m; ++k)
            for (int j = 0; j <= k; ++j) {
                INFO("n=" << n << " j=" << j << " k=" << k);
                double const mass = total_mass([&](double t) { return contaminated_density(g, n, j, k, t); });
                CHECK(std::fabs(mass - 1.0) < 1e-8);
            }
    }
    CHECK_THROWS_AS(contaminated_density(g, 6, 0, 0, 0.0), ParityError);
    CHECK_THROWS_AS(contaminated_density(g, 5, 2, 1, 0.0), IndexOutOfRange);
}

TEST_CASE("ideal midpoint density") {
    auto const d = make_normal();
    for (int n : {6, 10}) {
        double const mass = total_mass([&](double t) { return midpoint_density_ideal(d, n, t); }, 0.4);
        CHECK(std::fabs(mass - 1.0) < 1e-8);
    }
    for (double t : {0.1, 0.5})
        CHECK(std::fabs(midpoint_density_ideal(d, 6, t) - midpoint_density_ideal(d, 6, -t)) < 1e-9);
    double const second = integrate_peaked([&](double t) { return t * t * midpoint_density_ideal(d, 6, t); },
                                           0.0, 0.4, QuadratureSpec{})
                              .value;
    CHECK(6.0 * second == doctest::Approx(1.2884).epsilon(1e-4));
    // Same value from the nested consecutive-pair integral.
    CHECK(second == doctest::Approx(consecutive_midpoint_second_moment(d, 6, 3, QuadratureSpec{})).epsilon(1e-9));
    CHECK_THROWS_AS(midpoint_density_ideal(d, 5, 0.0), ParityError);
}

TEST_CASE("ideal-model exact risks") {
    auto const d = make_normal();
    ContaminationConfig const ideal;
    CHECK(exact_mse_odd(d, ideal, 5).value == doctest::Approx(1.4341).epsilon(1e-4));
    CHECK(exact_mse(d, ideal, 6, MedianVariant::LowerQuantile).value == doctest::Approx(1.7210).epsilon(1e-4));
    CHECK(exact_mse(d, ideal, 6, MedianVariant::BiasCorrected).value == doctest::Approx(1.4776).epsilon(1e-4));
    double const lo = exact_mse(d, ideal, 6, MedianVariant::LowerQuantile).value;
    double const up = exact_mse(d, ideal, 6, MedianVariant::UpperQuantile).value;
    CHECK(std::fabs(lo - up) < 1e-9);
    CHECK(exact_mse(d, ideal, 6, MedianVariant::Randomized).value == doctest::Approx(1.7210).epsilon(1e-4));

    // r = 0 reduces to the k = 0 term.
    double const direct = 11.0 * order_stat_expectation(d, 11, 6, [](double t) { return t * t; }, QuadratureSpec{});
    CHECK(exact_mse_odd(d, ideal, 11).value == direct);
    CHECK_THROWS_AS(exact_mse(d, ideal, 6, MedianVariant::OddMedian), ParityError);
    CHECK_THROWS_AS(exact_mse_odd(d, radius(-0.5), 5), NegativeRadius);
    CHECK_THROWS_AS(exact_mse_odd(d, radius(3.0), 5), DomainError);
}

TEST_CASE("contaminated exact risks") {
    auto const d = make_normal();
    CHECK(exact_mse_odd(d, radius(0.5), 5).value == doctest::Approx(3.045).epsilon(2e-4));
    CHECK(exact_mse_odd(d, radius(1.0), 5).value == doctest::Approx(4.509).epsilon(2e-4));
    CHECK(exact_mse_midpoint(d, radius(1.0), 100).value == doctest::Approx(3.952).epsilon(2e-4));
    // Symmetric model: both sides agree.
    CHECK(exact_mse(d, radius(0.5, ContaminationSide::Left), 10, MedianVariant::Midpoint).value ==
          doctest::Approx(exact_mse(d, radius(0.5), 10, MedianVariant::Midpoint).value).epsilon(1e-10));
}

TEST_CASE("weights") {
    auto const w = contamination_weights(5, radius(1.0));
    REQUIRE(w.size() == 3);
    CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0).epsilon(1e-15));
    auto raw = radius(1.0);
    raw.renormalize_weights = false;
    auto const wr = contamination_weights(5, raw);
    CHECK(wr[0] + wr[1] + wr[2] == doctest::Approx(1.0 - 0.40176).epsilon(1e-4));
    // At n = 5 the convention matters.
    CHECK(exact_mse_odd(make_normal(), raw, 5).value < exact_mse_odd(make_normal(), radius(1.0), 5).value - 1.0);
}

TEST_CASE("randomized is the average of the quantiles") {
    for (auto const& d : {make_normal(), make_gumbel_median()})
        for (int n : {6, 10})
            for (double r : {0.0, 0.5}) {
                double const lo = exact_mse(d, radius(r), n, MedianVariant::LowerQuantile).value;
                double const up = exact_mse(d, radius(r), n, MedianVariant::UpperQuantile).value;
                double const rnd = exact_mse(d, radius(r), n, MedianVariant::Randomized).value;
                CHECK(std::fabs(rnd - 0.5 * (lo + up)) < 1e-10);
            }
}

TEST_CASE("risk is nondecreasing in r") {
    auto const d = make_normal();
    for (int n : {5, 10, 30})
        for (auto v : {default_variant_for(n), n % 2 ? MedianVariant::OddMedian : MedianVariant::LowerQuantile}) {
            double prev = 0.0;
            for (double r : {0.0, 0.1, 0.25, 0.5, 1.0}) {
                double const val = exact_mse_worst_side(d, radius(r), n, v).value;
                CHECK(val >= prev);
                prev = val;
            }
        }
}

TEST_CASE("expansion error shrinks faster than 1/n") {
    auto const d = make_normal();
    auto err = [&](int n) {
        return n * std::fabs(asy_mse(d, 0.0, n, MedianVariant::OddMedian, AsyOrder::One).value -
                             exact_mse_odd(d, ContaminationConfig{}, n).value);
    };
    CHECK(err(101) < err(51));
}

TEST_CASE("skewed model: worst side and convergence") {
    auto const g = make_gumbel_median();
    for (auto v : {MedianVariant::OddMedian, MedianVariant::Midpoint, MedianVariant::LowerQuantile,
                   MedianVariant::UpperQuantile}) {
        int const base = v == MedianVariant::OddMedian ? 1 : 0;
        double const r = 1.0;
        auto worst = [&](int n) { return exact_mse_worst_side(g, radius(r), n, v).value; };
        auto gap = [&](int n) { return n * std::fabs(asy_mse(g, r, n, v, AsyOrder::One).value - worst(n)); };
        INFO(to_string(v));
        CHECK(gap(800 + base) < 0.7 * gap(200 + base));

        auto const side = coefficients(g, r, v).side;
        double const left = exact_mse(g, radius(r, ContaminationSide::Left), 200 + base, v).value;
        double const right = exact_mse(g, radius(r, ContaminationSide::Right), 200 + base, v).value;
        CHECK((left > right ? WorstSide::Left : WorstSide::Right) == side);
    }
}

TEST_CASE("finite contamination point") {
    auto const d = make_normal();
    auto far = radius(1.0);
    far.contamination_distance = 100.0;
    CHECK(exact_mse_odd(d, far, 5).value == doctest::Approx(exact_mse_odd(d, radius(1.0), 5).value).epsilon(1e-12));
    auto near = radius(1.0);
    near.contamination_distance = 1.0;
    double const v_near = exact_mse_odd(d, near, 5).value;
    CHECK(v_near < exact_mse_odd(d, radius(1.0), 5).value);
    CHECK(v_near > exact_mse_odd(d, ContaminationConfig{}, 5).value);
    CHECK_THROWS_AS(exact_mse_midpoint(d, far, 10), UsageError);
}

TEST_CASE("one contaminated point at zero lowers the risk") {
    auto const d = make_normal();
    for (int n : {11, 101}) {
        double const worst = exact_mse_odd(d, radius(0.5), n).value;
        double const zero = exact_mse_odd_one_point_at_zero(d, radius(0.5), n).value;
        CHECK(worst - zero > 0.0);
        CHECK(n * (worst - zero) > 1.0);
    }
}

TEST_CASE("exact bias and variance") {
    auto const d = make_normal();
    auto const e0 = exact_bias_var(d, ContaminationConfig{}, 11);
    CHECK(std::fabs(e0.bias) < 1e-12);
    CHECK(e0.var == doctest::Approx(exact_mse_odd(d, ContaminationConfig{}, 11).value).epsilon(1e-12));
    auto const e1 = exact_bias_var(d, radius(1.0), 30);
    CHECK(e1.var + e1.bias_sq == doctest::Approx(exact_mse_midpoint(d, radius(1.0), 30).value).epsilon(1e-9));
    for (int n : {1001, 1000}) {
        auto const e = exact_bias_var(d, radius(1.0), n);
        auto const a = bias_var_expansion(d, 1.0, n);
        CHECK(n * std::fabs(e.var - a.var) < 1.0);
        CHECK(n * std::fabs(std::fabs(e.bias) - a.abs_bias) < 0.5);
        CHECK(n * std::fabs(e.bias_sq - a.bias_sq) < 1.0);
    }
}

TEST_CASE("relative error curve") {
    auto const d = make_normal();
    std::vector<int> const ns{5, 6, 11, 101};
    auto const curve = relative_error_curve(d, ContaminationConfig{}, ns, AsyOrder::One);
    CHECK(curve[0].second == doctest::Approx(1.25e-3).epsilon(0.01));
    CHECK(curve[1].second == doctest::Approx(-7.126e-2).epsilon(1e-3));
    CHECK((curve[0].second > 0) != (curve[1].second > 0));
    auto const first = relative_error_curve(d, ContaminationConfig{}, ns, AsyOrder::Zero);
    CHECK(std::fabs(first[3].second) < std::fabs(first[2].second));
    CHECK_THROWS_AS(relative_error_curve(d, ContaminationConfig{}, std::span<const int>{}, AsyOrder::One), UsageError);
}

TEST_CASE("minimal n search") {
    auto const d = make_normal();
    CHECK(minimal_n_search(d, ContaminationConfig{}, 0.01, AsyOrder::One, 200) == 17);
    CHECK(minimal_n_search(d, radius(0.5), 0.05, AsyOrder::One, 150) == 20);
    CHECK_THROWS_AS(minimal_n_search(d, ContaminationConfig{}, 0.01, AsyOrder::Zero, 100), NotReached);
    CHECK_THROWS_AS(minimal_n_search(d, ContaminationConfig{}, 1.5, AsyOrder::One, 100), UsageError);
    std::vector<MinimalNQuery> const q{{0.01, AsyOrder::One}, {0.05, AsyOrder::One}, {0.01, AsyOrder::Zero}};
    auto const many = minimal_n_search_many(d, ContaminationConfig{}, q, 100);
    CHECK(many[0] == 17);
    CHECK(many[1] == 7);
    CHECK_FALSE(many[2]);
}

TEST_CASE("results do not depend on the thread count") {
    auto const d = make_normal();
    CHECK(exact_mse_midpoint(d, radius(1.0), 30, QuadratureSpec{}, 1).value ==
          exact_mse_midpoint(d, radius(1.0), 30, QuadratureSpec{}, 3).value);
    std::vector<int> const ns{5, 6, 7, 8};
    CHECK(relative_error_curve(d, radius(0.5), ns, AsyOrder::One, default_variant_for, QuadratureSpec{}, 1) ==
          relative_error_curve(d, radius(0.5), ns, AsyOrder::One, default_variant_for, QuadratureSpec{}, 4));
}
