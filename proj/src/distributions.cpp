#include "medrisk/distributions.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "medrisk/errors.hpp"
#include "medrisk/normal.hpp"

namespace medrisk {

double IdealDistribution::eval_log_cdf(double t) const {
    return log_cdf ? log_cdf(t) : std::log(cdf(t));
}

double IdealDistribution::eval_log_sf(double t) const {
    return log_sf ? log_sf(t) : std::log1p(-cdf(t));
}

double IdealDistribution::eval_log_pdf(double t) const {
    return log_pdf ? log_pdf(t) : std::log(pdf(t));
}

IdealDistribution make_normal() {
    IdealDistribution d;
    d.name = "normal";
    d.cdf = normal::cdf;
    d.pdf = normal::pdf;
    d.quantile = normal::quantile;
    d.log_cdf = normal::log_cdf;
    d.log_sf = normal::log_sf;
    d.log_pdf = normal::log_pdf;
    d.f0 = normal::kInvSqrt2Pi;
    d.f1 = 0.0;
    d.f2 = -normal::kInvSqrt2Pi;
    d.moment_exponent_delta = 0.5;
    d.scale = 1.0;
    d.symmetric = true;
    return d;
}

IdealDistribution make_gumbel_median() {
    // F(x) = exp(-c e^{-x}) with c = log 2, so F(0) = 1/2.
    static constexpr double c = 0.693147180559945309417232121458;
    IdealDistribution d;
    d.name = "gumbel";
    d.cdf = [](double x) { return std::exp(-c * std::exp(-x)); };
    d.log_cdf = [](double x) { return -c * std::exp(-x); };
    d.log_sf = [](double x) {
        double const w = c * std::exp(-x);
        return std::log(-std::expm1(-w));
    };
    d.pdf = [](double x) {
        double const w = c * std::exp(-x);
        return w * std::exp(-w);
    };
    d.log_pdf = [](double x) { return std::log(c) - x - c * std::exp(-x); };
    d.quantile = [](double p) { return std::log(c) - std::log(-std::log(p)); };
    // With w = c e^{-x}: f = w e^{-w}, f' = -w e^{-w}(1 - w), f'' = w e^{-w}(1 - 3w + w^2).
    d.f0 = 0.5 * c;
    d.f1 = -0.5 * c * (1.0 - c);
    d.f2 = 0.5 * c * (1.0 - 3.0 * c + c * c);
    d.moment_exponent_delta = 0.5;
    d.scale = 1.0;
    d.symmetric = false;
    return d;
}

IdealDistribution make_shifted_normal(double shift) {
    IdealDistribution d = make_normal();
    d.name = "normal_shifted";
    d.cdf = [shift](double x) { return normal::cdf(x - shift); };
    d.pdf = [shift](double x) { return normal::pdf(x - shift); };
    d.quantile = [shift](double p) { return normal::quantile(p) + shift; };
    d.log_cdf = [shift](double x) { return normal::log_cdf(x - shift); };
    d.log_sf = [shift](double x) { return normal::log_sf(x - shift); };
    d.log_pdf = [shift](double x) { return normal::log_pdf(x - shift); };
    d.symmetric = shift == 0.0;
    return d;
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](auto const& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (auto const& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

void add(ValidationReport& rep, std::string name, double residual, double tol) {
    rep.checks.push_back({std::move(name), residual <= tol, residual, tol});
}

}  // namespace

ValidationReport validate(const IdealDistribution& dist) {
    ValidationReport rep;

    double const median_resid = std::fabs(dist.cdf(0.0) - 0.5);
    if (median_resid > 1e-8)
        throw NonMedianCentered("cdf(0) = " + std::to_string(dist.cdf(0.0)) + " is not 1/2");
    if (!(dist.f0 > 0.0)) throw InvalidDensity("density at the median must be positive");
    add(rep, "median_centered", median_resid, 1e-12);

    // Taylor data against finite differences of pdf.
    double const h = 1e-4 * dist.scale;
    double const p0 = dist.pdf(0.0), pp = dist.pdf(h), pm = dist.pdf(-h);
    double const fd1 = (pp - pm) / (2.0 * h);
    double const fd2 = (pp - 2.0 * p0 + pm) / (h * h);
    auto taylor = [&](std::string name, double supplied, double numeric, double unit) {
        double const denom = std::max({std::fabs(supplied), std::fabs(numeric), unit});
        add(rep, std::move(name), std::fabs(supplied - numeric) / denom, 1e-4);
    };
    taylor("f0_matches_pdf", dist.f0, p0, dist.f0);
    taylor("f1_matches_pdf", dist.f1, fd1, dist.f0 / dist.scale);
    taylor("f2_matches_pdf", dist.f2, fd2, dist.f0 / (dist.scale * dist.scale));

    double const lo = dist.quantile(1e-10), hi = dist.quantile(1.0 - 1e-10);
    constexpr int kGrid = 401;
    double worst_q = 0.0, worst_q_tol = 1e-9;
    double worst_d = 0.0;
    double worst_sym = 0.0;
    bool monotone = true, nonneg = true;
    double prev = -1.0;
    double const hd = 1e-4 * dist.scale;
    for (int i = 0; i < kGrid; ++i) {
        double const t = lo + (hi - lo) * i / (kGrid - 1);
        double const p = dist.cdf(t);
        double const dens = dist.pdf(t);
        if (p < prev) monotone = false;
        prev = p;
        if (dens < 0.0) nonneg = false;

        // Rounding p to a double moves the quantile by about eps * p / f(t).
        double const q_resid = std::fabs(dist.quantile(p) - t);
        double const q_tol = 1e-9 + 4.0 * DBL_EPSILON * p / std::max(dens, DBL_MIN);
        if (q_resid / q_tol > worst_q / worst_q_tol) {
            worst_q = q_resid;
            worst_q_tol = q_tol;
        }

        // Differentiate the tail that carries relative precision.
        double deriv;
        if (t <= 0.0)
            deriv = (std::exp(dist.eval_log_cdf(t + hd)) - std::exp(dist.eval_log_cdf(t - hd))) /
                    (2.0 * hd);
        else
            deriv = (std::exp(dist.eval_log_sf(t - hd)) - std::exp(dist.eval_log_sf(t + hd))) /
                    (2.0 * hd);
        if (dens > 0.0) worst_d = std::max(worst_d, std::fabs(deriv - dens) / dens);

        if (dist.symmetric) worst_sym = std::max(worst_sym, std::fabs(dist.cdf(-t) + p - 1.0));
    }
    add(rep, "quantile_roundtrip", worst_q / worst_q_tol * 1e-9, 1e-9);
    add(rep, "pdf_matches_cdf_derivative", worst_d, 1e-6);
    add(rep, "cdf_nondecreasing", monotone ? 0.0 : 1.0, 0.0);
    add(rep, "pdf_nonnegative", nonneg ? 0.0 : 1.0, 0.0);
    if (dist.symmetric) add(rep, "symmetric", worst_sym, 1e-14);
    return rep;
}

}  // namespace medrisk
