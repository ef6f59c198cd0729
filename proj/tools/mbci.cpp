// mbci: multiboson correlation interferometry simulator CLI.
//
// Subcommands: permanent, rate, landscape, polscan, pav, sample, check.
// Exit codes: 0 success, 2 validation failure, 3 numeric failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbci/averaged.hpp"
#include "mbci/config.hpp"
#include "mbci/correlation.hpp"
#include "mbci/io.hpp"
#include "mbci/permanent.hpp"
#include "mbci/sampling.hpp"

namespace {

using namespace mbci;

PortSample ports_from_cli(const std::vector<int>& ports_1based, int port_count) {
  std::vector<PortIndex> zero_based;
  zero_based.reserve(ports_1based.size());
  for (int p : ports_1based) {
    zero_based.push_back(p - 1);
  }
  return make_port_sample(zero_based, port_count);
}

PortSample default_outputs(const Experiment& exp, const std::vector<int>& ports_1based) {
  if (!ports_1based.empty()) {
    return ports_from_cli(ports_1based, exp.network().port_count());
  }
  if (exp.network().port_count() == exp.photon_count()) {
    return full_port_sample(exp.network().port_count());
  }
  throw ValidationError("--ports is required when the network has more ports than photons");
}

JonesVector pol_from_string(const std::string& s) {
  if (s == "H" || s == "h") {
    return jones_h();
  }
  if (s == "V" || s == "v") {
    return jones_v();
  }
  if (s.rfind("linear:", 0) == 0) {
    return linear_polarization(std::stod(s.substr(7)) * std::numbers::pi / 180.0);
  }
  throw ValidationError("unknown polarization '" + s + "'");
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) {
    return std::cout;
  }
  file.open(path);
  if (!file) {
    throw ValidationError("cannot open output file '" + path + "'");
  }
  return file;
}

int run_permanent(const std::string& builder, const std::string& matrix_path,
                  const std::string& method_name) {
  Eigen::MatrixXcd m;
  if (!builder.empty()) {
    m = build_network(builder).matrix();
  } else if (!matrix_path.empty()) {
    m = load_unitary_json(matrix_path);
  } else {
    throw ValidationError("permanent needs --builder or --matrix");
  }
  const PermanentMethod method =
      (method_name == "naive") ? PermanentMethod::naive : PermanentMethod::ryser;
  const auto start = std::chrono::steady_clock::now();
  const PermanentResult result = compute_permanent(m, method);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::cout << "n: " << result.n << "\n";
  std::cout << "method: " << (method == PermanentMethod::ryser ? "ryser" : "naive") << "\n";
  std::cout << "value: " << format_double(result.value.real()) << " + "
            << format_double(result.value.imag()) << "i\n";
  std::cout << "abs2: " << format_double(std::norm(result.value)) << "\n";
  std::cout << "seconds: " << format_double(elapsed.count()) << "\n";
  return 0;
}

int run_rate(const ExperimentConfig& cfg, const std::vector<int>& ports,
             const std::vector<double>& times, const std::vector<std::string>& pols,
             std::optional<double> equal_time, const std::string& equal_pol,
             bool insensitive) {
  const Experiment exp = build_experiment(cfg);
  const PortSample outputs = default_outputs(exp, ports);
  std::cout << "# config_hash: " << config_hash(cfg) << "\n";
  if (equal_time.has_value()) {
    const double value = equal_time_rate(exp, outputs, *equal_time, pol_from_string(equal_pol));
    std::cout << format_double(value) << "\n";
    return 0;
  }
  if (times.size() != static_cast<std::size_t>(exp.photon_count())) {
    throw ValidationError("--times needs one value per photon");
  }
  if (insensitive) {
    std::cout << format_double(rate_polarization_insensitive(exp, outputs, times)) << "\n";
    return 0;
  }
  DetectionEvent event;
  event.output_sample = outputs;
  event.times = times;
  if (pols.size() != times.size()) {
    throw ValidationError("--pols needs one value per photon (or use --insensitive)");
  }
  for (const auto& p : pols) {
    event.polarizations.push_back(pol_from_string(p));
  }
  std::cout << format_double(rate(exp, event)) << "\n";
  return 0;
}

int run_landscape(const ExperimentConfig& cfg, const std::vector<int>& ports, double range,
                  int steps, const std::string& mean_time_flag, const std::string& out,
                  const std::string& format) {
  const Experiment exp = build_experiment(cfg);
  const PortSample outputs = default_outputs(exp, ports);
  LandscapeSpec spec;
  spec.tau21_min = -range;
  spec.tau21_max = range;
  spec.tau32_min = -range;
  spec.tau32_max = range;
  spec.steps21 = steps;
  spec.steps32 = steps;
  const MeanTimeReduction reduction =
      parse_mean_time(mean_time_flag.empty() ? cfg.mean_time : mean_time_flag);
  const Grid2D grid = landscape(exp, outputs, spec, reduction);
  ArtifactMetadata meta{"landscape", config_hash(cfg), "tau21", "tau32"};
  std::ofstream file;
  std::ostream& os = open_output(file, out);
  if (format == "json") {
    write_grid_json(os, grid, meta);
  } else {
    write_grid_csv(os, grid, meta);
  }
  return 0;
}

int run_polscan(const ExperimentConfig& cfg, const std::vector<int>& ports, double time,
                const std::string& trigger, int steps, const std::string& out,
                const std::string& format) {
  const Experiment exp = build_experiment(cfg);
  const PortSample outputs = default_outputs(exp, ports);
  const Eigen::VectorXd angles = Eigen::VectorXd::LinSpaced(steps, 0.0, std::numbers::pi);
  const Grid2D grid =
      polarization_scan(exp, outputs, time, pol_from_string(trigger), angles, angles);
  ArtifactMetadata meta{"polscan", config_hash(cfg), "alpha", "beta"};
  std::ofstream file;
  std::ostream& os = open_output(file, out);
  if (format == "json") {
    write_grid_json(os, grid, meta);
  } else {
    write_grid_csv(os, grid, meta);
  }
  std::cerr << "fringe_visibility: " << format_double(fringe_visibility(grid)) << "\n";
  return 0;
}

int run_pav(const ExperimentConfig& cfg, bool oracle, const std::string& out,
            const std::string& format) {
  const Experiment exp = build_experiment(cfg);
  const GramMatrix g = gram_matrix(exp.photons(), exp.tolerances());
  const PavTable table = pav_table(exp.network(), exp.input_sample(), g);
  ArtifactMetadata meta{"pav", config_hash(cfg)};
  std::ofstream file;
  std::ostream& os = open_output(file, out);
  if (format == "json") {
    write_pav_json(os, table, meta);
  } else {
    write_pav_csv(os, table, meta);
  }
  if (oracle) {
    if (exp.photon_count() > 3) {
      throw ValidationError("--oracle is limited to N <= 3");
    }
    double max_diff = 0.0;
    for (const auto& [sample, p] : table.entries) {
      const double q = pav_quadrature_oracle(exp, sample);
      max_diff = std::max(max_diff, std::abs(q - p));
      std::cerr << "oracle D=(";
      for (int i = 0; i < sample.size(); ++i) {
        std::cerr << (i ? "," : "") << sample[i] + 1;
      }
      std::cerr << "): table " << format_double(p) << " quadrature " << format_double(q)
                << "\n";
    }
    std::cerr << "oracle max |diff|: " << format_double(max_diff) << "\n";
  }
  return 0;
}

int run_sample(const ExperimentConfig& cfg, std::uint64_t count, std::uint64_t seed,
               bool check, const std::string& out) {
  SamplerConfig sampler_cfg{build_experiment(cfg), seed};
  const CorrelationSampler sampler(std::move(sampler_cfg));
  const SampleBatch batch = sampler.sample_batch(count);

  std::ofstream file;
  std::ostream& os = open_output(file, out);
  nlohmann::json header{{"command", "sample"},
                        {"config_hash", config_hash(cfg)},
                        {"seed", seed},
                        {"count", count},
                        {"collision_free_mass", batch.collision_free_mass},
                        {"acceptance_rate", batch.stats.acceptance_rate()}};
  os << header.dump() << "\n";
  for (const auto& ev : batch.events) {
    nlohmann::json line;
    auto& event_ports = line["ports"] = nlohmann::json::array();
    for (int i = 0; i < ev.event.output_sample.size(); ++i) {
      event_ports.push_back(ev.event.output_sample[i] + 1);
    }
    line["times"] = ev.event.times;
    line["polarizations"] = ev.polarization_indices;
    os << line.dump() << "\n";
  }
  std::cerr << "collision_free_mass: " << format_double(batch.collision_free_mass) << "\n";
  std::cerr << "acceptance_rate: " << format_double(batch.stats.acceptance_rate()) << "\n";
  if (check && count > 0) {
    const ChiSquareResult chi = empirical_check(batch, sampler.table());
    std::cerr << "chi2: " << format_double(chi.statistic) << " dof: " << chi.dof
              << " p: " << format_double(chi.p_value) << "\n";
  }
  return 0;
}

int run_check(const ExperimentConfig& cfg) {
  const Experiment exp = build_experiment(cfg);
  const UnitarityReport report =
      check_unitary(exp.network().matrix(), cfg.tolerances.unitarity);
  std::cout << "network: " << cfg.network_spec << " (M = " << exp.network().port_count()
            << ")\n";
  std::cout << "photons: " << exp.photon_count() << "\n";
  std::cout << "unitarity max deviation: " << format_double(report.max_deviation) << "\n";
  std::cout << "config_hash: " << config_hash(cfg) << "\n";
  std::cout << "ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiboson correlation interferometry simulator"};
  app.require_subcommand(1);

  auto* perm_cmd = app.add_subcommand("permanent", "permanent of a unitary or JSON matrix");
  std::string perm_builder;
  std::string perm_matrix;
  std::string perm_method = "ryser";
  perm_cmd->add_option("--builder", perm_builder, "network builder name");
  perm_cmd->add_option("--matrix", perm_matrix, "JSON matrix file");
  perm_cmd->add_option("--method", perm_method, "ryser or naive")
      ->check(CLI::IsMember({"ryser", "naive"}));

  std::string config_path;
  std::vector<int> ports;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config JSON")->required();
  };
  auto add_ports = [&](CLI::App* cmd) {
    cmd->add_option("--ports", ports, "1-based output ports")->delimiter(',');
  };

  auto* rate_cmd = app.add_subcommand("rate", "N-fold detection rate");
  std::vector<double> rate_times;
  std::vector<std::string> rate_pols;
  double rate_equal_time = 0.0;
  std::string rate_equal_pol = "H";
  bool rate_insensitive = false;
  add_config(rate_cmd);
  add_ports(rate_cmd);
  rate_cmd->add_option("--times", rate_times, "detection times")->delimiter(',');
  rate_cmd->add_option("--pols", rate_pols, "detector polarizations")->delimiter(',');
  auto* equal_time_opt = rate_cmd->add_option("--time", rate_equal_time, "equal-time rate at t");
  rate_cmd->add_option("--pol", rate_equal_pol, "equal-time polarization");
  rate_cmd->add_flag("--insensitive", rate_insensitive, "sum over basis polarizations");

  auto* land_cmd = app.add_subcommand("landscape", "relative-time coincidence landscape");
  double land_range = 6.0;
  int land_steps = 241;
  std::string land_mean_time;
  std::string land_out;
  std::string land_format = "csv";
  add_config(land_cmd);
  add_ports(land_cmd);
  land_cmd->add_option("--range", land_range, "half-range of tau21 and tau32");
  land_cmd->add_option("--steps", land_steps, "grid steps per axis");
  land_cmd->add_option("--mean-time", land_mean_time, "marginal or fixed:<t>");
  land_cmd->add_option("--out", land_out, "output file (default stdout)");
  land_cmd->add_option("--format", land_format)->check(CLI::IsMember({"csv", "json"}));

  auto* pol_cmd = app.add_subcommand("polscan", "polarization-angle correlation scan");
  double pol_time = 0.0;
  std::string pol_trigger = "H";
  int pol_steps = 181;
  std::string pol_out;
  std::string pol_format = "csv";
  add_config(pol_cmd);
  add_ports(pol_cmd);
  pol_cmd->add_option("--time", pol_time, "common detection time");
  pol_cmd->add_option("--trigger", pol_trigger, "trigger detector polarization");
  pol_cmd->add_option("--steps", pol_steps, "angle steps over [0, pi]");
  pol_cmd->add_option("--out", pol_out, "output file (default stdout)");
  pol_cmd->add_option("--format", pol_format)->check(CLI::IsMember({"csv", "json"}));

  auto* pav_cmd = app.add_subcommand("pav", "averaged probabilities over all output samples");
  bool pav_oracle = false;
  std::string pav_out;
  std::string pav_format = "csv";
  add_config(pav_cmd);
  pav_cmd->add_flag("--oracle", pav_oracle, "cross-check with nested quadrature (N <= 3)");
  pav_cmd->add_option("--out", pav_out, "output file (default stdout)");
  pav_cmd->add_option("--format", pav_format)->check(CLI::IsMember({"csv", "json"}));

  auto* sample_cmd = app.add_subcommand("sample", "draw detection events");
  std::uint64_t sample_count = 1;
  std::uint64_t sample_seed = 0;
  bool sample_check = false;
  std::string sample_out;
  add_config(sample_cmd);
  sample_cmd->add_option("--count", sample_count, "number of events");
  sample_cmd->add_option("--seed", sample_seed, "RNG seed");
  sample_cmd->add_flag("--check", sample_check, "chi-square check against the P_av table");
  sample_cmd->add_option("--out", sample_out, "output file (default stdout)");

  auto* check_cmd = app.add_subcommand("check", "validate a config");
  add_config(check_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (perm_cmd->parsed()) {
      return run_permanent(perm_builder, perm_matrix, perm_method);
    }
    const ExperimentConfig cfg = parse_config(config_path);
    if (rate_cmd->parsed()) {
      return run_rate(cfg, ports, rate_times, rate_pols,
                      equal_time_opt->count() > 0 ? std::optional<double>(rate_equal_time)
                                                  : std::nullopt,
                      rate_equal_pol, rate_insensitive);
    }
    if (land_cmd->parsed()) {
      return run_landscape(cfg, ports, land_range, land_steps, land_mean_time, land_out,
                           land_format);
    }
    if (pol_cmd->parsed()) {
      return run_polscan(cfg, ports, pol_time, pol_trigger, pol_steps, pol_out, pol_format);
    }
    if (pav_cmd->parsed()) {
      return run_pav(cfg, pav_oracle, pav_out, pav_format);
    }
    if (sample_cmd->parsed()) {
      return run_sample(cfg, sample_count, sample_seed, sample_check, sample_out);
    }
    if (check_cmd->parsed()) {
      return run_check(cfg);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
