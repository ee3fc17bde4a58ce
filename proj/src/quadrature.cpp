#include "medrisk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "medrisk/errors.hpp"

namespace medrisk {

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208932113712, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk21(const Integrand& f, double a, double b) {
    double const center = 0.5 * (a + b);
    double const half = 0.5 * (b - a);
    double const fc = f(center);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    double resabs = std::fabs(resk);
    std::array<double, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        double const dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        double const s = f1[j] + f2[j];
        resk += kWgk[j] * s;
        resabs += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * s;
    }
    double const mean = 0.5 * resk;
    double resasc = kWgk[10] * std::fabs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));

    resk *= half;
    resabs *= std::fabs(half);
    resasc *= std::fabs(half);
    double err = std::fabs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > DBL_MIN / (50.0 * DBL_EPSILON)) err = std::max(50.0 * DBL_EPSILON * resabs, err);
    return {a, b, resk, err};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                           std::span<const double> breakpoints) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
        throw UsageError("quadrature tolerances must be positive");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw UsageError("integrate needs finite limits; use integrate_peaked for infinite ranges");
    QuadratureResult out;
    if (a == b) return out;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::vector<double> cuts{a};
    for (double x : breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Segment> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Segment s = gk21(f, cuts[i], cuts[i + 1]);
        out.evaluations += 21;
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }

    std::size_t splits = 0;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
        if (splits >= spec.max_subdivisions)
            throw QuadratureFailure("tolerance not reached within " +
                                    std::to_string(spec.max_subdivisions) +
                                    " subdivisions (estimate " + std::to_string(total) +
                                    ", error " + std::to_string(total_err) + ")");
        Segment worst = heap.top();
        double const mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) < 64.0 * DBL_EPSILON * std::max(std::fabs(worst.a), std::fabs(worst.b)))
            throw QuadratureFailure("roundoff prevents further subdivision near " +
                                    std::to_string(mid));
        heap.pop();
        Segment left = gk21(f, worst.a, mid);
        Segment right = gk21(f, mid, worst.b);
        out.evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }

    // Re-sum from the segments to limit drift from the running updates.
    double sum = 0.0, err = 0.0;
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](auto const& x, auto const& y) { return x.a < y.a; });
    for (auto const& s : segs) {
        sum += s.value;
        err += s.error;
    }
    out.value = sign * sum;
    out.abs_error = err;
    out.subdivisions = splits;
    return out;
}

QuadratureResult integrate_peaked(const Integrand& f, double center, double scale,
                                  const QuadratureSpec& spec, double lo, double hi, double cut) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw UsageError("integrate_peaked: bad scale");
    center = std::clamp(center, lo, hi);
    double peak = std::fabs(f(center));
    std::vector<double> pts{center};

    auto walk = [&](double dir, double limit) {
        double step = scale;
        for (int k = 0; k < 80; ++k, step *= 2.0) {
            double x = center + dir * step;
            if ((dir > 0.0 && x >= limit) || (dir < 0.0 && x <= limit)) {
                pts.push_back(limit);
                return;
            }
            double const v = std::fabs(f(x));
            pts.push_back(x);
            peak = std::max(peak, v);
            if (k >= 2 && v <= cut * peak) return;
        }
    };
    walk(1.0, hi);
    walk(-1.0, lo);
    if (peak == 0.0) return {};

    std::sort(pts.begin(), pts.end());
    double const a = pts.front(), b = pts.back();
    if (!std::isfinite(a) || !std::isfinite(b))
        throw QuadratureFailure("integrand does not decay within the explored range");
    return integrate(f, a, b, spec, std::span<const double>(pts).subspan(1, pts.size() - 2));
}

}  // namespace medrisk
