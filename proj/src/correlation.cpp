#include "mbci/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbci/parallel.hpp"
#include "mbci/permanent.hpp"
#include "mbci/quadrature.hpp"

namespace mbci {

Experiment::Experiment(InterferometerUnitary network, PortSample input_sample,
                       std::vector<SpectralAmplitude> photons, double delta_t,
                       Tolerances tolerances)
    : network_(std::move(network)),
      inputs_(std::move(input_sample)),
      delta_t_(delta_t),
      tolerances_(tolerances) {
  tolerances_.validate();
  if (inputs_.port_count() != network_.port_count()) {
    throw SizeMismatchError("input sample does not match the network port count");
  }
  if (static_cast<int>(photons.size()) != inputs_.size()) {
    throw SizeMismatchError("photon count must equal the number of occupied input ports");
  }
  // the paper's port-count condition 2M >= 2N
  if (network_.port_count() < inputs_.size()) {
    throw ValidationError("network needs at least as many ports as photons");
  }
  photons_.reserve(photons.size());
  for (auto& p : photons) {
    photons_.emplace_back(std::move(p), delta_t_);
  }
}

namespace {

void check_event_sizes(const Experiment& exp, const PortSample& outputs,
                       std::size_t times, std::size_t pols) {
  const auto n = static_cast<std::size_t>(exp.photon_count());
  if (static_cast<std::size_t>(outputs.size()) != n || times != n || pols != n) {
    throw SizeMismatchError("detection event size does not match the photon number");
  }
  if (outputs.port_count() != exp.network().port_count()) {
    throw SizeMismatchError("output sample does not match the network port count");
  }
}

// U(d, s) * chi_s(t_d): the polarization-independent part of the detection
// matrix, shared by all basis outcomes at fixed times.
Eigen::MatrixXcd amplitude_matrix(const Experiment& exp, const PortSample& outputs,
                                  const std::vector<double>& times) {
  const int n = exp.photon_count();
  Eigen::MatrixXcd a(n, n);
  for (int s = 0; s < n; ++s) {
    const auto& chi = exp.photon(s);
    for (int d = 0; d < n; ++d) {
      a(d, s) = exp.network()(outputs[d], exp.input_sample()[s]) *
                chi.eval(times[static_cast<std::size_t>(d)]);
    }
  }
  return a;
}

}  // namespace

DetectionMatrix detection_matrix(const Experiment& exp, const DetectionEvent& event) {
  check_event_sizes(exp, event.output_sample, event.times.size(), event.polarizations.size());
  const int n = exp.photon_count();
  DetectionMatrix dm;
  dm.t = amplitude_matrix(exp, event.output_sample, event.times);
  for (int d = 0; d < n; ++d) {
    for (int s = 0; s < n; ++s) {
      dm.t(d, s) *= jones_inner(event.polarizations[static_cast<std::size_t>(d)],
                                exp.photon(s).polarization());
    }
  }
  return dm;
}

double rate(const Experiment& exp, const DetectionEvent& event) {
  return std::norm(permanent_ryser(detection_matrix(exp, event).t));
}

double rate_polarization_insensitive(const Experiment& exp, const PortSample& outputs,
                                     const std::vector<double>& times,
                                     const PolarizationBasis& basis) {
  check_event_sizes(exp, outputs, times.size(), times.size());
  const int n = exp.photon_count();
  const Eigen::MatrixXcd amp = amplitude_matrix(exp, outputs, times);

  // projections of each photon's polarization onto the two analyzer settings
  Eigen::MatrixXcd proj(2, n);
  for (int s = 0; s < n; ++s) {
    proj(0, s) = jones_inner(basis.e1, exp.photon(s).polarization());
    proj(1, s) = jones_inner(basis.e2, exp.photon(s).polarization());
  }

  double total = 0.0;
  Eigen::MatrixXcd t(n, n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool zero_row = false;
    for (int d = 0; d < n && !zero_row; ++d) {
      const int lambda = (mask >> d) & 1u;
      zero_row = true;
      for (int s = 0; s < n; ++s) {
        const Complex v = amp(d, s) * proj(lambda, s);
        t(d, s) = v;
        if (v != Complex(0, 0)) {
          zero_row = false;
        }
      }
    }
    if (!zero_row) {
      total += std::norm(permanent_ryser(t));
    }
  }
  return total;
}

double equal_time_rate(const Experiment& exp, const PortSample& outputs, double t,
                       const JonesVector& p) {
  check_event_sizes(exp, outputs, static_cast<std::size_t>(outputs.size()),
                    static_cast<std::size_t>(outputs.size()));
  const Submatrix sub = submatrix(exp.network(), outputs, exp.input_sample());
  double densities = 1.0;
  for (int s = 0; s < exp.photon_count(); ++s) {
    densities *= detection_density(exp.photon(s), p, t);
  }
  return std::norm(permanent_ryser(sub.entries)) * densities;
}

namespace {

double envelope_center(const Experiment& exp) {
  double sum = 0.0;
  for (const auto& chi : exp.photons()) {
    sum += chi.window().center;
  }
  return sum / static_cast<double>(exp.photon_count());
}

double max_sigma(const Experiment& exp) {
  double s = 0.0;
  for (const auto& chi : exp.photons()) {
    s = std::max(s, chi.window().sigma);
  }
  return s;
}

}  // namespace

Grid2D landscape(const Experiment& exp, const PortSample& outputs, const LandscapeSpec& spec,
                 const MeanTimeReduction& reduction, const PolarizationBasis& basis) {
  if (exp.photon_count() != 3) {
    throw ValidationError("landscape is defined for three-photon experiments");
  }
  check_event_sizes(exp, outputs, 3, 3);
  if (spec.steps21 < 2 || spec.steps32 < 2) {
    throw ValidationError("landscape needs at least 2 steps per axis");
  }
  const auto nodes =
      static_cast<std::int64_t>(spec.steps21) * static_cast<std::int64_t>(spec.steps32);
  if (nodes > 10'000'000) {
    throw GridTooFineError("landscape grid exceeds 1e7 nodes");
  }

  Grid2D grid;
  grid.x = Eigen::VectorXd::LinSpaced(spec.steps21, spec.tau21_min, spec.tau21_max);
  grid.y = Eigen::VectorXd::LinSpaced(spec.steps32, spec.tau32_min, spec.tau32_max);
  grid.values.resize(spec.steps21, spec.steps32);

  // quadrature nodes for the mean detection time
  std::vector<double> tbar_nodes;
  std::vector<double> tbar_weights;
  if (reduction.mode == MeanTimeReduction::Mode::marginal) {
    const GaussLegendreRule& rule = gauss_legendre(reduction.gl_points);
    const double center = envelope_center(exp);
    const double half = reduction.half_width_sigmas * max_sigma(exp);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      tbar_nodes.push_back(center + half * rule.nodes[k]);
      tbar_weights.push_back(half * rule.weights[k]);
    }
  } else {
    tbar_nodes.push_back(reduction.fixed_t);
    tbar_weights.push_back(1.0);
  }

  parallel_for(static_cast<std::size_t>(spec.steps21), [&](std::size_t begin, std::size_t end) {
    std::vector<double> times(3);
    for (std::size_t i = begin; i < end; ++i) {
      const double tau21 = grid.x(static_cast<Eigen::Index>(i));
      for (int j = 0; j < spec.steps32; ++j) {
        const double tau32 = grid.y(j);
        // offsets with zero mean so tbar is the mean detection time
        const double off1 = -(2.0 * tau21 + tau32) / 3.0;
        const double off2 = (tau21 - tau32) / 3.0;
        const double off3 = (tau21 + 2.0 * tau32) / 3.0;
        double value = 0.0;
        for (std::size_t k = 0; k < tbar_nodes.size(); ++k) {
          times[0] = tbar_nodes[k] + off1;
          times[1] = tbar_nodes[k] + off2;
          times[2] = tbar_nodes[k] + off3;
          value += tbar_weights[k] *
                   rate_polarization_insensitive(exp, outputs, times, basis);
        }
        grid.values(static_cast<Eigen::Index>(i), j) = value;
      }
    }
  });
  return grid;
}

Grid2D polarization_scan(const Experiment& exp, const PortSample& outputs, double t,
                         const JonesVector& trigger_pol, const Eigen::VectorXd& alpha_grid,
                         const Eigen::VectorXd& beta_grid) {
  if (exp.photon_count() != 3) {
    throw ValidationError("polarization_scan is defined for three-photon experiments");
  }
  check_event_sizes(exp, outputs, 3, 3);
  if (alpha_grid.size() < 1 || beta_grid.size() < 1) {
    throw ValidationError("polarization scan needs non-empty angle grids");
  }

  Grid2D grid;
  grid.x = alpha_grid;
  grid.y = beta_grid;
  grid.values.resize(alpha_grid.size(), beta_grid.size());

  const std::vector<double> times(3, t);
  const Eigen::MatrixXcd amp = amplitude_matrix(exp, outputs, times);

  parallel_for(static_cast<std::size_t>(alpha_grid.size()),
               [&](std::size_t begin, std::size_t end) {
                 Eigen::MatrixXcd tm(3, 3);
                 for (std::size_t i = begin; i < end; ++i) {
                   const JonesVector pa = linear_polarization(grid.x(static_cast<Eigen::Index>(i)));
                   for (Eigen::Index j = 0; j < grid.y.size(); ++j) {
                     const JonesVector pb = linear_polarization(grid.y(j));
                     const JonesVector pols[3] = {trigger_pol, pa, pb};
                     for (int d = 0; d < 3; ++d) {
                       for (int s = 0; s < 3; ++s) {
                         tm(d, s) = amp(d, s) * jones_inner(pols[d], exp.photon(s).polarization());
                       }
                     }
                     grid.values(static_cast<Eigen::Index>(i), j) =
                         std::norm(permanent_ryser(tm));
                   }
                 }
               });
  return grid;
}

double fringe_visibility(const Grid2D& grid) {
  if (grid.values.size() == 0) {
    throw ValidationError("fringe_visibility requires a non-empty grid");
  }
  const double vmax = grid.values.maxCoeff();
  const double vmin = grid.values.minCoeff();
  if (vmin < 0.0) {
    throw ValidationError("fringe_visibility requires non-negative values");
  }
  if (vmax + vmin == 0.0) {
    return 0.0;
  }
  return (vmax - vmin) / (vmax + vmin);
}

}  // namespace mbci
