#pragma once

#include <functional>
#include <vector>

// Small statistics helpers for validating sampled event streams against the
// closed-form distributions.

namespace mbci {

/// Regularized upper incomplete gamma Q(a, x) (series + continued fraction).
double regularized_gamma_q(double a, double x);

/// Survival function of the chi-squared distribution with dof degrees of
/// freedom, i.e. P(X >= x).
double chi_squared_survival(double x, int dof);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-square of observed counts against expected counts. Bins with
/// expected count below min_expected are pooled.
ChiSquareResult pearson_chi_square(const std::vector<double>& observed,
                                   const std::vector<double>& expected,
                                   double min_expected = 5.0);

/// Kolmogorov-Smirnov statistic of samples against a model CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace mbci
