#include "mbci/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mbci/core.hpp"

namespace mbci {

namespace {

// P(a, x) by its power series, for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) {
      break;
    }
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by modified Lentz continued fraction, for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) {
      d = tiny;
    }
    c = b + an / c;
    if (std::abs(c) < tiny) {
      c = tiny;
    }
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      break;
    }
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw ValidationError("regularized_gamma_q requires a > 0, x >= 0");
  }
  if (x == 0.0) {
    return 1.0;
  }
  if (x < a + 1.0) {
    return 1.0 - gamma_p_series(a, x);
  }
  return gamma_q_cf(a, x);
}

double chi_squared_survival(double x, int dof) {
  if (dof < 1) {
    throw ValidationError("chi_squared_survival requires dof >= 1");
  }
  return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult pearson_chi_square(const std::vector<double>& observed,
                                   const std::vector<double>& expected,
                                   double min_expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw ValidationError("pearson_chi_square requires matching non-empty bins");
  }
  // pool under-filled bins into one
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  double statistic = 0.0;
  int bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < min_expected) {
      pooled_obs += observed[i];
      pooled_exp += expected[i];
    } else {
      const double diff = observed[i] - expected[i];
      statistic += diff * diff / expected[i];
      ++bins;
    }
  }
  if (pooled_exp > 0.0) {
    const double diff = pooled_obs - pooled_exp;
    statistic += diff * diff / pooled_exp;
    ++bins;
  }
  ChiSquareResult result;
  result.statistic = statistic;
  result.dof = std::max(bins - 1, 1);
  result.p_value = chi_squared_survival(statistic, result.dof);
  return result;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw ValidationError("ks_statistic requires samples");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::abs(f - lo), std::abs(f - hi)));
  }
  return d;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace mbci
