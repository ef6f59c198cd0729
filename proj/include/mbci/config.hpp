#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mbci/core.hpp"
#include "mbci/correlation.hpp"
#include "mbci/network.hpp"

// Experiment configuration files. All frequencies and times are dimensionless
// multiples of a reference bandwidth dw_ref = 1 (frequencies in dw_ref, times
// in 1/dw_ref); ports are 1-based in files and on the command line.

namespace mbci {

struct PhotonSpec {
  double omega0_rel = 0.0;
  double bandwidth_rel = 1.0;
  double t0_rel = 0.0;
  JonesVector polarization = jones_h();
};

struct ExperimentConfig {
  std::string network_spec;        // builder name or "file:<path>"
  std::vector<int> input_ports;    // 1-based
  std::vector<PhotonSpec> photons;
  double delta_t_rel = 0.0;
  Tolerances tolerances;
  std::string mean_time = "marginal";  // or "fixed:<t>"
  std::string canonical_json;          // sorted-key dump, input to the hash
};

/// Parses and validates a JSON experiment config.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_string(const std::string& text);

/// "beamsplitter", "tritter_fig2a", "fourier:M", "haar:M:seed", "file:path".
InterferometerUnitary build_network(const std::string& spec, double unitarity_tol = 1e-10);

/// Row-major [re, im] pairs from a JSON document {"entries": [[re,im], ...]}.
Eigen::MatrixXcd load_unitary_json(const std::string& path);

Experiment build_experiment(const ExperimentConfig& config);

MeanTimeReduction parse_mean_time(const std::string& text);

/// FNV-1a 64-bit hash of the canonical config dump, for artifact provenance.
std::string config_hash(const ExperimentConfig& config);

}  // namespace mbci
