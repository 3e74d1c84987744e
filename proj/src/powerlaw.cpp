#include "epindex/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "epindex/errors.hpp"
#include "epindex/stats.hpp"

namespace epindex {

double pp_top(double ep, double x) {
    if (!(ep > 0.0 && ep < 1.0))
        throw Error(Errc::domain_error, "pp_top needs 0 < ep < 1");
    if (!(x > 0.0 && x <= 100.0))
        throw Error(Errc::domain_error, "pp_top needs 0 < x <= 100");
    return 100.0 * std::pow(ep, 2.0 - std::log10(x));
}

double pp_top_breakthrough(double ep) { return pp_top(ep, 0.01); }

namespace {

struct FitCore {
    double slope = 0.0;
    double intercept = 2.0;
    double r_squared = 0.0;
    double r_squared_linear = 0.0;
    double chi_squared = 0.0;
    double p_value = 0.0;
};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Weighted least squares of y = intercept + slope * t over the kept indices;
// R^2 values are unweighted, chi^2 always uses the binomial sigma.
FitCore fit_points(const std::vector<double>& t, const std::vector<double>& y,
                   const std::vector<double>& pp, const std::vector<std::size_t>& keep,
                   double n_mean, const FitOptions& options) {
    const double ln10 = std::log(10.0);
    std::vector<double> sigma(t.size());
    for (std::size_t i : keep) {
        double p = pp[i] / 100.0;
        sigma[i] = std::sqrt(p * (1.0 - p) / n_mean) / (p * ln10);
    }

    FitCore core;
    if (options.fixed_intercept) {
        double num = 0.0, den = 0.0;
        for (std::size_t i : keep) {
            double w = options.weights == FitOptions::Weights::binomial
                           ? 1.0 / (sigma[i] * sigma[i])
                           : 1.0;
            num += w * t[i] * (y[i] - 2.0);
            den += w * t[i] * t[i];
        }
        core.slope = num / den;
        core.intercept = 2.0;
    } else {
        double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i : keep) {
            double w = options.weights == FitOptions::Weights::binomial
                           ? 1.0 / (sigma[i] * sigma[i])
                           : 1.0;
            sw += w;
            sx += w * t[i];
            sy += w * y[i];
            sxx += w * t[i] * t[i];
            sxy += w * t[i] * y[i];
        }
        double det = sw * sxx - sx * sx;
        core.slope = (sw * sxy - sx * sy) / det;
        core.intercept = (sxx * sy - sx * sxy) / det;
    }

    double y_mean = 0.0, pp_mean = 0.0;
    for (std::size_t i : keep) {
        y_mean += y[i];
        pp_mean += pp[i];
    }
    y_mean /= static_cast<double>(keep.size());
    pp_mean /= static_cast<double>(keep.size());

    double ss_res = 0.0, ss_tot = 0.0, ss_res_lin = 0.0, ss_tot_lin = 0.0;
    core.chi_squared = 0.0;
    for (std::size_t i : keep) {
        double y_hat = core.intercept + core.slope * t[i];
        double pp_hat = std::pow(10.0, y_hat);
        ss_res += (y[i] - y_hat) * (y[i] - y_hat);
        ss_tot += (y[i] - y_mean) * (y[i] - y_mean);
        ss_res_lin += (pp[i] - pp_hat) * (pp[i] - pp_hat);
        ss_tot_lin += (pp[i] - pp_mean) * (pp[i] - pp_mean);
        double z = (y[i] - y_hat) / sigma[i];
        core.chi_squared += z * z;
    }
    core.r_squared = ss_tot > 0.0 ? clamp01(1.0 - ss_res / ss_tot) : (ss_res == 0.0 ? 1.0 : 0.0);
    core.r_squared_linear =
        ss_tot_lin > 0.0 ? clamp01(1.0 - ss_res_lin / ss_tot_lin) : (ss_res_lin == 0.0 ? 1.0 : 0.0);

    double dof = static_cast<double>(keep.size()) - (options.fixed_intercept ? 1.0 : 2.0);
    core.p_value = stats::chi_squared_tail(core.chi_squared, dof);
    return core;
}

// All index subsets of size k in lexicographic order.
void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k == 0) {
        fn(idx);
        return;
    }
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

EpFit fit_ep(const TopShareCurve& curve, const FitOptions& options) {
    if (options.max_omit < 0 || options.max_omit > 2)
        throw Error(Errc::bad_config, "max_omit must be 0, 1, or 2");
    if (!(options.min_r_squared > 0.0 && options.min_r_squared <= 1.0))
        throw Error(Errc::bad_config, "min_r_squared must be in (0, 1]");
    if (curve.low_n && !options.allow_low_n)
        throw Error(Errc::low_n, "curve below the yearly paper floor; pass allow_low_n to force");

    const std::size_t n = curve.pp_values.size();
    if (n < 4) throw Error(Errc::insufficient_points, "need at least 4 points");
    if (curve.percentiles.size() != n)
        throw Error(Errc::domain_error, "percentile/pp length mismatch");

    std::vector<double> t(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(curve.pp_values[i] > 0.0))
            throw Error(Errc::non_positive_share,
                        "pp at percentile " + std::to_string(curve.percentiles[i]));
        t[i] = 2.0 - std::log10(curve.percentiles[i]);
        y[i] = std::log10(curve.pp_values[i]);
    }

    double n_mean = curve.mean_yearly_papers();
    if (!(n_mean > 0.0))
        throw Error(Errc::domain_error, "curve carries no yearly paper counts");

    const std::size_t max_k =
        std::min<std::size_t>(static_cast<std::size_t>(options.max_omit), n - 4);

    // Exhaustive leave-k-out: k ascending and subsets lexicographic, with
    // strict improvement, give the spec's tie-break for free.
    bool have_best = false;
    FitCore best_core;
    std::vector<std::size_t> best_omit;
    for (std::size_t k = 0; k <= max_k; ++k) {
        for_each_combination(n, k, [&](const std::vector<std::size_t>& omit) {
            std::vector<std::size_t> keep;
            keep.reserve(n - k);
            for (std::size_t i = 0; i < n; ++i) {
                if (std::find(omit.begin(), omit.end(), i) == omit.end()) keep.push_back(i);
            }
            FitCore core = fit_points(t, y, curve.pp_values, keep, n_mean, options);
            if (!have_best || core.r_squared > best_core.r_squared) {
                have_best = true;
                best_core = core;
                best_omit = omit;
            }
        });
    }

    std::vector<double> omitted;
    for (std::size_t i : best_omit) omitted.push_back(curve.percentiles[i]);

    if (best_core.r_squared < options.min_r_squared)
        throw FitRejectedError("log-space R^2 " + std::to_string(best_core.r_squared) +
                                   " below gate " + std::to_string(options.min_r_squared),
                               best_core.r_squared, omitted);

    double ep = std::pow(10.0, best_core.slope);
    if (!(ep > 0.0 && ep < 1.0))
        throw FitRejectedError("fitted slope is non-negative (ep >= 1)", best_core.r_squared,
                               omitted);

    EpFit fit;
    fit.ep = ep;
    fit.slope = best_core.slope;
    fit.intercept = best_core.intercept;
    fit.r_squared = best_core.r_squared;
    fit.r_squared_linear = best_core.r_squared_linear;
    fit.chi_squared = best_core.chi_squared;
    fit.p_value = best_core.p_value;
    fit.n_points = static_cast<int>(n - best_omit.size());
    fit.omitted_percentiles = std::move(omitted);
    fit.low_n = curve.low_n;
    fit.implausible = ep <= 0.01 || ep > 0.30;
    return fit;
}

}  // namespace epindex
