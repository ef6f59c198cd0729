#include "mbci/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mbci/quadrature.hpp"

namespace mbci {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double trapezoid_norm_sq(const SampledSpectrum& s) {
  double sum = 0.0;
  const Eigen::Index n = s.values.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    sum += w * std::norm(s.values(j));
  }
  return sum * s.omega_step;
}

Complex sampled_transform(const SampledSpectrum& s, double t) {
  // (2 pi)^(-1/2) int dw xi(w) e^(-i w t), trapezoid on the grid
  Complex sum(0, 0);
  const Eigen::Index n = s.values.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    const double omega = s.omega_start + s.omega_step * static_cast<double>(j);
    sum += w * s.values(j) * std::polar(1.0, -omega * t);
  }
  return sum * s.omega_step / std::sqrt(kTwoPi);
}

TimeWindow sampled_window(const SampledSpectrum& s, double delay) {
  // The discrete transform is periodic with period 2 pi / omega_step; locate
  // the pulse inside one period around the delay, then take |chi|^2 moments.
  const double period = kTwoPi / s.omega_step;
  const int probes = std::max<int>(512, 8 * static_cast<int>(s.values.size()));
  std::vector<double> density(static_cast<std::size_t>(probes));
  double best_t = delay;
  double best = -1.0;
  for (int k = 0; k < probes; ++k) {
    const double t = delay - 0.5 * period + period * (k + 0.5) / probes;
    const double d = std::norm(sampled_transform(s, t - delay));
    density[static_cast<std::size_t>(k)] = d;
    if (d > best) {
      best = d;
      best_t = t;
    }
  }
  // re-center the window on the peak and accumulate moments
  double mass = 0.0, mean = 0.0, second = 0.0;
  for (int k = 0; k < probes; ++k) {
    double t = best_t - 0.5 * period + period * (k + 0.5) / probes;
    const double d = std::norm(sampled_transform(s, t - delay));
    mass += d;
    mean += d * t;
    second += d * t * t;
  }
  TimeWindow win;
  if (mass > 0) {
    mean /= mass;
    second /= mass;
    win.center = mean;
    win.sigma = std::sqrt(std::max(second - mean * mean, 1e-12 * period * period));
  } else {
    win.center = delay;
    win.sigma = period / 8.0;
  }
  return win;
}

}  // namespace

SpectralAmplitude::SpectralAmplitude(Shape shape, JonesVector polarization,
                                     double normalization_tol)
    : shape_(std::move(shape)), pol_(polarization) {
  if (const auto* g = std::get_if<GaussianSpectrum>(&shape_)) {
    if (!(g->bandwidth > 0.0)) {
      throw NonPositiveBandwidthError("Gaussian bandwidth must be positive");
    }
  } else {
    const auto& s = std::get<SampledSpectrum>(shape_);
    if (s.values.size() < 8) {
      throw ValidationError("sampled spectrum needs at least 8 grid points");
    }
    if (!(s.omega_step > 0.0)) {
      throw ValidationError("sampled spectrum needs a positive grid step");
    }
    const double norm_sq = trapezoid_norm_sq(s);
    if (std::abs(norm_sq - 1.0) > normalization_tol) {
      throw NormalizationError("sampled spectrum is not normalized: int |xi|^2 = " +
                               std::to_string(norm_sq));
    }
  }
}

Complex SpectralAmplitude::eval(double omega) const {
  if (is_gaussian()) {
    const auto& g = gaussian();
    const double var = g.bandwidth * g.bandwidth;
    const double envelope = std::pow(kTwoPi * var, -0.25) *
                            std::exp(-(omega - g.center_frequency) * (omega - g.center_frequency) /
                                     (4.0 * var));
    return envelope * std::polar(1.0, omega * g.emission_time);
  }
  const auto& s = sampled();
  const double pos = (omega - s.omega_start) / s.omega_step;
  if (pos < 0.0 || pos > static_cast<double>(s.values.size() - 1)) {
    return Complex(0, 0);
  }
  const auto j = static_cast<Eigen::Index>(pos);
  const double frac = pos - static_cast<double>(j);
  if (j + 1 >= s.values.size()) {
    return s.values(j);
  }
  return (1.0 - frac) * s.values(j) + frac * s.values(j + 1);
}

SpectralAmplitude gaussian_photon(double center_frequency, double bandwidth,
                                  double emission_time, const JonesVector& polarization) {
  return SpectralAmplitude(GaussianSpectrum{center_frequency, bandwidth, emission_time},
                           polarization);
}

SpectralAmplitude sampled_photon(double omega_start, double omega_step,
                                 Eigen::VectorXcd values, const JonesVector& polarization) {
  SampledSpectrum s{omega_start, omega_step, std::move(values)};
  if (s.values.size() < 8) {
    throw ValidationError("sampled spectrum needs at least 8 grid points");
  }
  if (!(omega_step > 0.0)) {
    throw ValidationError("sampled spectrum needs a positive grid step");
  }
  const double norm_sq = trapezoid_norm_sq(s);
  if (!(norm_sq > 0.0) || !std::isfinite(norm_sq)) {
    throw NormalizationError("sampled spectrum has zero or non-finite norm");
  }
  s.values /= std::sqrt(norm_sq);
  return SpectralAmplitude(std::move(s), polarization);
}

TemporalAmplitude::TemporalAmplitude(SpectralAmplitude source, double delay)
    : source_(std::move(source)), delay_(delay) {
  if (source_.is_gaussian()) {
    const auto& g = source_.gaussian();
    window_.center = g.emission_time + delay_;
    window_.sigma = 1.0 / (2.0 * g.bandwidth);
  } else {
    window_ = sampled_window(source_.sampled(), delay_);
  }
}

Complex TemporalAmplitude::eval(double t) const {
  if (source_.is_gaussian()) {
    const auto& g = source_.gaussian();
    const double var = g.bandwidth * g.bandwidth;
    const double u = t - g.emission_time - delay_;
    // (2 bw^2 / pi)^(1/4) exp(-bw^2 u^2) exp(-i w0 u)
    return std::pow(2.0 * var / kPi, 0.25) * std::exp(-var * u * u) *
           std::polar(1.0, -g.center_frequency * u);
  }
  return sampled_transform(source_.sampled(), t - delay_);
}

TemporalAmplitude to_temporal(const SpectralAmplitude& source, double delay) {
  return TemporalAmplitude(source, delay);
}

TemporalSample eval_temporal(const TemporalAmplitude& chi, double t) {
  return TemporalSample{chi.eval(t), chi.polarization()};
}

double detection_density(const TemporalAmplitude& chi, const JonesVector& p, double t) {
  return std::norm(jones_inner(p, chi.polarization())) * std::norm(chi.eval(t));
}

namespace {

Complex gaussian_overlap_scalar(const TemporalAmplitude& a, const TemporalAmplitude& b) {
  const auto& ga = a.source().gaussian();
  const auto& gb = b.source().gaussian();
  const double va = ga.bandwidth * ga.bandwidth;
  const double vb = gb.bandwidth * gb.bandwidth;
  const double ta = ga.emission_time + a.delay();
  const double tb = gb.emission_time + b.delay();
  const double wa = ga.center_frequency;
  const double wb = gb.center_frequency;
  // int conj(chi_a) chi_b dt for two Gaussian wavepackets; the exponent's
  // real part is -(wa-wb)^2/(4(va+vb)) - va vb (ta-tb)^2/(va+vb) <= 0.
  const Complex beta(2.0 * (va * ta + vb * tb), wa - wb);
  const Complex gamma(-(va * ta * ta + vb * tb * tb), -(wa * ta - wb * tb));
  const double prefactor = std::pow(2.0 * va / kPi, 0.25) * std::pow(2.0 * vb / kPi, 0.25) *
                           std::sqrt(kPi / (va + vb));
  return prefactor * std::exp(beta * beta / (4.0 * (va + vb)) + gamma);
}

}  // namespace

Complex overlap(const TemporalAmplitude& a, const TemporalAmplitude& b, double quadrature_rel) {
  const Complex pol = jones_inner(a.polarization(), b.polarization());
  if (std::abs(pol) == 0.0) {
    return Complex(0, 0);
  }
  if (a.source().is_gaussian() && b.source().is_gaussian()) {
    return pol * gaussian_overlap_scalar(a, b);
  }
  const double sigma = std::max(a.window().sigma, b.window().sigma);
  const double lo = std::min(a.window().center, b.window().center) - 10.0 * sigma;
  const double hi = std::max(a.window().center, b.window().center) + 10.0 * sigma;
  QuadratureOptions opts;
  opts.rel_tol = quadrature_rel;
  opts.abs_tol = 1e-12;
  const Complex scalar = integrate_adaptive(
      [&](double t) { return std::conj(a.eval(t)) * b.eval(t); }, lo, hi, opts);
  return pol * scalar;
}

GramMatrix::GramMatrix(Eigen::MatrixXcd g, double normalization_tol) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() < 1) {
    throw NotSquareError("Gram matrix must be square and non-empty");
  }
  const int n = static_cast<int>(g_.rows());
  for (int i = 0; i < n; ++i) {
    if (std::abs(g_(i, i) - Complex(1, 0)) > normalization_tol) {
      throw NormalizationError("Gram diagonal entry " + std::to_string(i) +
                               " deviates from 1");
    }
    g_(i, i) = Complex(1, 0);
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(g_(i, j) - std::conj(g_(j, i))) > 1e-12) {
        throw ValidationError("Gram matrix is not Hermitian");
      }
      if (std::abs(g_(i, j)) > 1.0 + normalization_tol) {
        throw ValidationError("Gram entry exceeds unit magnitude");
      }
      const Complex avg = 0.5 * (g_(i, j) + std::conj(g_(j, i)));
      g_(i, j) = avg;
      g_(j, i) = std::conj(avg);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw ValidationError("Gram matrix is not positive semidefinite");
  }
}

GramMatrix gram_matrix(const std::vector<TemporalAmplitude>& photons, const Tolerances& tol) {
  if (photons.empty()) {
    throw ValidationError("gram_matrix requires at least one photon");
  }
  const int n = static_cast<int>(photons.size());
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = overlap(photons[static_cast<std::size_t>(i)], photons[static_cast<std::size_t>(i)],
                      tol.quadrature_rel);
    for (int j = i + 1; j < n; ++j) {
      const Complex v = overlap(photons[static_cast<std::size_t>(i)],
                                photons[static_cast<std::size_t>(j)], tol.quadrature_rel);
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return GramMatrix(std::move(g), tol.normalization);
}

}  // namespace mbci
