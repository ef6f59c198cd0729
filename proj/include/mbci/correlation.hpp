#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mbci/core.hpp"
#include "mbci/network.hpp"
#include "mbci/photonics.hpp"

// Time- and polarization-resolved N-fold detection rates. The detection
// matrix T(d, s) = U(d, s) <p_d, eps_s> chi_s(t_d) collects one single-photon
// amplitude per (detector, photon) pair; the N-fold rate is |perm T|^2, the
// coherent sum over the N! N-photon quantum paths. At equal detection times
// the columns factor and the rate collapses to |perm U^(D,S)|^2 times a
// product of single-photon densities.

namespace mbci {

/// An input configuration: network, occupied input ports, and the photons
/// (one per occupied port, in sample order).
class Experiment {
 public:
  Experiment(InterferometerUnitary network, PortSample input_sample,
             std::vector<SpectralAmplitude> photons, double delta_t,
             Tolerances tolerances = {});

  const InterferometerUnitary& network() const { return network_; }
  const PortSample& input_sample() const { return inputs_; }
  const std::vector<TemporalAmplitude>& photons() const { return photons_; }
  const TemporalAmplitude& photon(int s) const {
    return photons_[static_cast<std::size_t>(s)];
  }
  double delta_t() const { return delta_t_; }
  const Tolerances& tolerances() const { return tolerances_; }
  int photon_count() const { return static_cast<int>(photons_.size()); }

 private:
  InterferometerUnitary network_;
  PortSample inputs_;
  std::vector<TemporalAmplitude> photons_;
  double delta_t_ = 0.0;
  Tolerances tolerances_;
};

/// One N-fold detection outcome: output ports (strictly increasing), and the
/// detection time and analyzed polarization at each of them.
struct DetectionEvent {
  PortSample output_sample;
  std::vector<double> times;
  std::vector<JonesVector> polarizations;
};

struct DetectionMatrix {
  Eigen::MatrixXcd t;  // rows ordered by D, columns by S
};

DetectionMatrix detection_matrix(const Experiment& exp, const DetectionEvent& event);

/// G = |perm T|^2; a probability density over the N detection times.
double rate(const Experiment& exp, const DetectionEvent& event);

/// Detection basis for polarization-insensitive measurements; must be
/// orthonormal. Defaults to {H, V}.
struct PolarizationBasis {
  JonesVector e1 = jones_h();
  JonesVector e2 = jones_v();
};

/// Sum of the rate over all 2^N basis polarization outcomes at the detectors.
double rate_polarization_insensitive(const Experiment& exp, const PortSample& outputs,
                                     const std::vector<double>& times,
                                     const PolarizationBasis& basis = {});

/// Equal-time factorized rate |perm U^(D,S)|^2 prod_s |<p, eps_s> chi_s(t)|^2.
/// Algebraically identical to rate() at coincident arguments.
double equal_time_rate(const Experiment& exp, const PortSample& outputs, double t,
                       const JonesVector& p);

/// A dense 2D scan result: axis coordinates plus row-major values(i, j) with
/// i indexing x and j indexing y.
struct Grid2D {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::MatrixXd values;
};

struct LandscapeSpec {
  double tau21_min = -6.0;
  double tau21_max = 6.0;
  double tau32_min = -6.0;
  double tau32_max = 6.0;
  int steps21 = 241;
  int steps32 = 241;
};

/// How the absolute (mean) detection time is reduced away in landscapes:
/// marginalized by Gauss-Legendre quadrature (default), or pinned.
struct MeanTimeReduction {
  enum class Mode { marginal, fixed };
  Mode mode = Mode::marginal;
  double fixed_t = 0.0;
  int gl_points = 64;
  double half_width_sigmas = 8.0;
};

/// Three-photon coincidence landscape over the relative detection times
/// (tau21, tau32) = (t2 - t1, t3 - t2), polarization-insensitive.
Grid2D landscape(const Experiment& exp, const PortSample& outputs, const LandscapeSpec& spec,
                 const MeanTimeReduction& reduction = {},
                 const PolarizationBasis& basis = {});

/// Three-fold rate at equal times t with p1 = trigger and p2, p3 linear at
/// the scanned angles (alpha, beta).
Grid2D polarization_scan(const Experiment& exp, const PortSample& outputs, double t,
                         const JonesVector& trigger_pol, const Eigen::VectorXd& alpha_grid,
                         const Eigen::VectorXd& beta_grid);

/// (max - min) / (max + min) over a non-negative grid; 0 for an all-zero grid.
double fringe_visibility(const Grid2D& grid);

}  // namespace mbci
