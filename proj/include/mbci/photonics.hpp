#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mbci/core.hpp"

// Photon wavepackets. A photon is a normalized complex spectral amplitude
// xi(omega) times a constant Jones vector. Its temporal amplitude is the
// unitary Fourier transform
//
//   chi(t) = F[xi](t - delta_t),  F[xi](t) = (2 pi)^(-1/2) int dw xi(w) e^(-i w t),
//
// so Parseval carries the spectral normalization over to int |chi|^2 dt = 1
// and detection rates integrate to probabilities without extra constants.
// Emission time enters as the spectral phase e^(i w t0): later t0 means later
// arrival, and the Gaussian envelope peaks at t0 + delta_t.

namespace mbci {

/// Gaussian spectrum with |xi(w)|^2 variance = bandwidth^2:
///   xi(w) = (2 pi bw^2)^(-1/4) exp(-(w - w0)^2 / (4 bw^2)) e^(i w t0).
struct GaussianSpectrum {
  double center_frequency = 0.0;
  double bandwidth = 1.0;
  double emission_time = 0.0;
};

/// Complex amplitudes on a uniform frequency grid, trapezoid-normalized.
/// Emission time and chirp live in the phases of the sampled values.
struct SampledSpectrum {
  double omega_start = 0.0;
  double omega_step = 0.0;
  Eigen::VectorXcd values;
};

class SpectralAmplitude {
 public:
  using Shape = std::variant<GaussianSpectrum, SampledSpectrum>;

  SpectralAmplitude(Shape shape, JonesVector polarization, double normalization_tol = 1e-8);

  bool is_gaussian() const { return std::holds_alternative<GaussianSpectrum>(shape_); }
  const GaussianSpectrum& gaussian() const { return std::get<GaussianSpectrum>(shape_); }
  const SampledSpectrum& sampled() const { return std::get<SampledSpectrum>(shape_); }
  const JonesVector& polarization() const { return pol_; }

  /// xi(omega), scalar part (without the Jones vector).
  Complex eval(double omega) const;

 private:
  Shape shape_;
  JonesVector pol_;
};

SpectralAmplitude gaussian_photon(double center_frequency, double bandwidth,
                                  double emission_time, const JonesVector& polarization);

/// Normalizes the sampled values (trapezoid rule) and validates the grid
/// (uniform, at least 8 points).
SpectralAmplitude sampled_photon(double omega_start, double omega_step,
                                 Eigen::VectorXcd values, const JonesVector& polarization);

/// Center and RMS width of |chi(t)|^2; used to place quadrature windows and
/// to propose detection times.
struct TimeWindow {
  double center = 0.0;
  double sigma = 1.0;
};

/// chi(t) = F[xi](t - delta_t). Gaussian sources evaluate in closed form; a
/// sampled source evaluates the discrete transform of its grid.
class TemporalAmplitude {
 public:
  TemporalAmplitude(SpectralAmplitude source, double delay);

  const SpectralAmplitude& source() const { return source_; }
  double delay() const { return delay_; }
  const JonesVector& polarization() const { return source_.polarization(); }
  const TimeWindow& window() const { return window_; }

  /// Scalar complex amplitude chi(t); the photon's full vector amplitude is
  /// eval(t) * polarization().
  Complex eval(double t) const;

 private:
  SpectralAmplitude source_;
  double delay_ = 0.0;
  TimeWindow window_;
};

TemporalAmplitude to_temporal(const SpectralAmplitude& source, double delay);

struct TemporalSample {
  Complex amplitude;
  JonesVector polarization;
};

TemporalSample eval_temporal(const TemporalAmplitude& chi, double t);

/// |<p, pol>|^2 |chi(t)|^2, the single-photon detection probability density
/// behind a polarizer p.
double detection_density(const TemporalAmplitude& chi, const JonesVector& p, double t);

/// g_ab = <eps_a, eps_b> int conj(chi_a)(t) chi_b(t) dt. Gaussian pairs use
/// the closed form; anything else integrates adaptively to quadrature_rel.
Complex overlap(const TemporalAmplitude& a, const TemporalAmplitude& b,
                double quadrature_rel = 1e-9);

/// N x N Hermitian positive-semidefinite matrix of pairwise overlaps with
/// unit diagonal; the source of every overlap factor f_rho.
class GramMatrix {
 public:
  explicit GramMatrix(Eigen::MatrixXcd g, double normalization_tol = 1e-8);

  int size() const { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return g_; }
  Complex operator()(int s, int t) const { return g_(s, t); }

 private:
  Eigen::MatrixXcd g_;
};

GramMatrix gram_matrix(const std::vector<TemporalAmplitude>& photons,
                       const Tolerances& tol = {});

}  // namespace mbci
