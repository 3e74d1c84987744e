#pragma once

#include <span>

namespace epindex::stats {

double mean(std::span<const double> values);

// Population standard deviation (divides by n), matching the printed table
// reproduction; see the calibration module notes.
double population_sd(std::span<const double> values);

// Standard normal CDF, computed through erfc for tail stability.
double normal_cdf(double z);

// Upper tail of the chi-squared distribution: P(X >= chi2) with `dof`
// degrees of freedom, i.e. the regularized incomplete gamma Q(dof/2, chi2/2).
double chi_squared_tail(double chi2, double dof);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// series/continued-fraction split at x = a + 1.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace epindex::stats
