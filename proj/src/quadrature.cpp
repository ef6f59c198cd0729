#include "mbci/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace mbci {

Complex integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  if (!(b > a)) {
    return Complex(0, 0);
  }
  std::int64_t intervals = opts.initial_intervals;
  double h = (b - a) / static_cast<double>(intervals);

  Complex trapezoid = 0.5 * (f(a) + f(b));
  for (std::int64_t i = 1; i < intervals; ++i) {
    trapezoid += f(a + h * static_cast<double>(i));
  }
  trapezoid *= h;

  Complex simpson_prev(0, 0);
  bool have_prev = false;
  int agreements = 0;
  for (int level = 0; level < opts.max_doublings; ++level) {
    // add midpoints of the current intervals
    Complex mid(0, 0);
    for (std::int64_t i = 0; i < intervals; ++i) {
      mid += f(a + h * (static_cast<double>(i) + 0.5));
    }
    const Complex refined = 0.5 * trapezoid + 0.5 * h * mid;
    const Complex simpson = (4.0 * refined - trapezoid) / 3.0;

    if (have_prev) {
      const double err = std::abs(simpson - simpson_prev);
      const double bound = std::max(opts.rel_tol * std::abs(simpson), opts.abs_tol);
      agreements = (err <= bound) ? agreements + 1 : 0;
      // oscillatory integrands can agree by accident at coarse sampling;
      // require two consecutive agreements
      if (agreements >= 2) {
        return simpson;
      }
    }
    simpson_prev = simpson;
    have_prev = true;
    trapezoid = refined;
    intervals *= 2;
    h *= 0.5;
  }
  throw QuadratureFailureError("quadrature did not reach the requested tolerance");
}

double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               const QuadratureOptions& opts) {
  const Complex value =
      integrate_adaptive([&f](double t) { return Complex(f(t), 0.0); }, a, b, opts);
  return value.real();
}

const GaussLegendreRule& gauss_legendre(int points) {
  if (points < 1) {
    throw ValidationError("gauss_legendre requires at least 1 point");
  }
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(points);
  if (it != cache.end()) {
    return it->second;
  }

  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(points));
  rule.weights.resize(static_cast<std::size_t>(points));
  const int n = points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  auto [pos, inserted] = cache.emplace(points, std::move(rule));
  return pos->second;
}

}  // namespace mbci
