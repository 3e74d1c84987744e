#pragma once

#include <string>
#include <vector>

#include "epindex/percentiles.hpp"

namespace epindex {

struct FitOptions {
    enum class Weights { binomial, unweighted };

    bool fixed_intercept = true;   // pin the model through PP(100) = 100
    int max_omit = 0;              // exhaustive leave-k-out search, k <= 2
    double min_r_squared = 0.99;   // log-space acceptance gate
    Weights weights = Weights::binomial;
    bool allow_low_n = false;      // fit curves below the size floor anyway
};

struct EpFit {
    double ep = 0.0;                 // 10^slope, in (0, 1)
    double slope = 0.0;              // lg ep
    double intercept = 2.0;          // lg 100 when fixed
    double r_squared = 0.0;          // log-log space
    double r_squared_linear = 0.0;   // secondary diagnostic
    double chi_squared = 0.0;
    double p_value = 0.0;
    int n_points = 0;                // points used (after omission)
    std::vector<double> omitted_percentiles;
    bool low_n = false;
    bool implausible = false;        // ep outside (0.01, 0.30]
};

// Linearizes y = lg pp against t = 2 - lg x and fits y = 2 + slope*t
// (or y = b + slope*t with a free intercept). Binomial weights use
// sigma_i = sqrt(p(1-p)/n) / (p ln 10) in log space with n the mean yearly
// institutional paper count. With max_omit > 0 every leave-k-out subset is
// tried and the best log-space R^2 kept (ties: fewer omissions, then
// lexicographically smallest omitted set). Throws FitRejectedError when the
// final R^2 misses options.min_r_squared, plus insufficient_points,
// non_positive_share, low_n.
EpFit fit_ep(const TopShareCurve& curve, const FitOptions& options = {});

// PP_top x% = 100 * ep^(2 - lg x); strictly increasing in both arguments,
// equal to 100 at x = 100. Requires 0 < ep < 1 and 0 < x <= 100.
double pp_top(double ep, double x);

// Share of output expected inside the global top 0.01% (= 100 * ep^4).
double pp_top_breakthrough(double ep);

}  // namespace epindex
