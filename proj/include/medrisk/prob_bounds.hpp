#pragma once

#include <vector>

namespace medrisk {

/// log C(n, k) via log-gamma; -inf when k is outside [0, n].
double log_choose(double n, double k);

/// Binomial(n, p) pmf at k, evaluated in log space.
double binomial_pmf(int n, double p, int k);

/// All pmf values Binomial(n, p) at k = 0..kmax (kmax clipped to n).
std::vector<double> binomial_pmf_range(int n, double p, int kmax);

/// Largest number of contaminated observations the thinned neighborhood
/// admits: ceil(n/2) - 1.
int thinning_threshold(int n);

/// Exact P(Bin(n, r/sqrt(n)) > threshold), summed in log space.
double thinning_probability(int n, double r, int threshold);

struct TailBound {
    int n = 0;
    double r = 0.0;
    double k1 = 0.0;
    double kappa = 0.0;       ///< k1 log k1 + 1 - k1
    double bound = 0.0;       ///< Hoeffding bound for P(Bin(n, r/sqrt n) > k1 r sqrt n)
    double asymptotic = 0.0;  ///< exp(-kappa r sqrt n); informative only, not a bound
};

/// Pre-asymptotic Hoeffding bound
///   {(mu/(mu+eps))^(mu+eps) ((1-mu)/(1-mu-eps))^(1-mu-eps)}^n,
/// mu = r/sqrt(n), eps = (k1-1) mu. Requires k1 > 1 and 0 < eps < 1 - mu;
/// r = 0 is accepted as the degenerate case with bound 0.
TailBound hoeffding_tail(int n, double r, double k1);

/// k1 log k1 + 1 - k1.
double hoeffding_kappa(double k1);

/// E[X^order] for X ~ Bin(n, r/sqrt(n)), order in 1..4, from the closed
/// forms in powers of sqrt(n).
double binomial_moments(int n, double r, int order);

}  // namespace medrisk
