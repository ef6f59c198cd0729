#pragma once

#include <functional>
#include <vector>

#include "mbci/core.hpp"

// 1D quadrature used for wavepacket overlaps, mean-time reduction of
// landscapes, and the averaged-probability oracle.

namespace mbci {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;       // absolute convergence floor
  int initial_intervals = 64;  // power of two
  int max_doublings = 18;
};

/// Adaptive trapezoid with one Richardson (Simpson) extrapolation step;
/// intervals double until two consecutive refinements agree to tolerance.
/// Throws QuadratureFailureError if the budget runs out.
Complex integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               const QuadratureOptions& opts = {});

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre nodes/weights via Newton iteration; results are cached.
const GaussLegendreRule& gauss_legendre(int points);

}  // namespace mbci
