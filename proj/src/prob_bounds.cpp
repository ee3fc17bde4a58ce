#include "medrisk/prob_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "medrisk/errors.hpp"

namespace medrisk {

double log_choose(double n, double k) {
    if (k < 0.0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_pmf(int n, double p, int k) {
    if (k < 0 || k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    double const lp = log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p);
    return std::exp(lp);
}

std::vector<double> binomial_pmf_range(int n, double p, int kmax) {
    kmax = std::min(kmax, n);
    std::vector<double> w(static_cast<std::size_t>(std::max(kmax + 1, 0)));
    for (int k = 0; k <= kmax; ++k) w[k] = binomial_pmf(n, p, k);
    return w;
}

int thinning_threshold(int n) { return (n + 1) / 2 - 1; }

double thinning_probability(int n, double r, int threshold) {
    if (n < 0 || threshold < 0 || threshold > n)
        throw DomainError("thinning_probability: need 0 <= threshold <= n");
    if (r < 0.0) throw NegativeRadius(r);
    double const p = r / std::sqrt(static_cast<double>(n));
    if (p > 1.0) throw DomainError("thinning_probability: r/sqrt(n) exceeds 1");
    // Sum the shorter side to keep the result relatively accurate.
    double const mean = n * p;
    double s = 0.0;
    if (threshold + 1 > mean) {
        for (int k = n; k > threshold; --k) s += binomial_pmf(n, p, k);
        return s;
    }
    for (int k = 0; k <= threshold; ++k) s += binomial_pmf(n, p, k);
    return std::max(0.0, 1.0 - s);
}

double hoeffding_kappa(double k1) { return k1 * std::log(k1) + 1.0 - k1; }

TailBound hoeffding_tail(int n, double r, double k1) {
    if (n < 1) throw DomainError("hoeffding_tail: n must be >= 1");
    if (!(k1 > 1.0)) throw DomainError("hoeffding_tail: k1 must exceed 1");
    if (r < 0.0) throw NegativeRadius(r);
    TailBound tb;
    tb.n = n;
    tb.r = r;
    tb.k1 = k1;
    tb.kappa = hoeffding_kappa(k1);
    double const sqn = std::sqrt(static_cast<double>(n));
    tb.asymptotic = std::exp(-tb.kappa * r * sqn);
    if (r == 0.0) {
        tb.bound = 0.0;  // the binomial is degenerate at 0
        return tb;
    }
    double const mu = r / sqn;
    double const eps = (k1 - 1.0) * mu;
    if (!(eps > 0.0 && eps < 1.0 - mu))
        throw DomainError("hoeffding_tail: need 0 < (k1-1) r/sqrt(n) < 1 - r/sqrt(n)");
    double const a = mu + eps;
    double const log_b = a * std::log(mu / a) + (1.0 - a) * (std::log1p(-mu) - std::log1p(-a));
    tb.bound = std::exp(n * log_b);
    return tb;
}

double binomial_moments(int n, double r, int order) {
    if (n < 0) throw DomainError("binomial_moments: n must be >= 0");
    if (r < 0.0) throw NegativeRadius(r);
    if (order < 1 || order > 4) throw DomainError("binomial_moments: order must be in 1..4");
    double const s = std::sqrt(static_cast<double>(n));
    if (n == 0) return 0.0;
    if (r / s > 1.0) throw DomainError("binomial_moments: r/sqrt(n) exceeds 1");
    double const N = n;
    double const r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
    switch (order) {
        case 1:
            return r * s;
        case 2:
            return r2 * N + r * s - r2;
        case 3:
            return r3 * N * s + 3.0 * r2 * N + (r - 3.0 * r3) * s - 3.0 * r2 + 2.0 * r3 / s;
        default:
            return r4 * N * N + 6.0 * r3 * N * s + (7.0 * r2 - 6.0 * r4) * N +
                   (r - 18.0 * r3) * s + 11.0 * r4 - 7.0 * r2 + 12.0 * r3 / s - 6.0 * r4 / N;
    }
}

}  // namespace medrisk
