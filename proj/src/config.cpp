#include "mbci/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace mbci {

namespace {

using nlohmann::json;

JonesVector parse_polarization(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "H" || s == "h") {
      return jones_h();
    }
    if (s == "V" || s == "v") {
      return jones_v();
    }
    if (s.rfind("linear:", 0) == 0) {
      const double degrees = std::stod(s.substr(7));
      return linear_polarization(degrees * std::numbers::pi / 180.0);
    }
    throw ValidationError("unknown polarization '" + s +
                          "' (expected H, V, linear:<deg>, or [[re,im],[re,im]])");
  }
  if (j.is_array() && j.size() == 2 && j[0].is_array() && j[0].size() == 2 &&
      j[1].is_array() && j[1].size() == 2) {
    return JonesVector(Complex(j[0][0].get<double>(), j[0][1].get<double>()),
                       Complex(j[1][0].get<double>(), j[1][1].get<double>()));
  }
  throw ValidationError("polarization must be a string or a pair of [re, im] pairs");
}

ExperimentConfig parse_config_document(const json& doc) {
  if (!doc.is_object()) {
    throw ValidationError("config root must be a JSON object");
  }
  ExperimentConfig cfg;
  try {
    cfg.network_spec = doc.at("network").get<std::string>();
    cfg.input_ports = doc.at("input_ports").get<std::vector<int>>();
    if (!doc.contains("photons") || !doc.at("photons").is_array()) {
      throw ValidationError("config requires a 'photons' array");
    }
    for (const auto& p : doc.at("photons")) {
      PhotonSpec spec;
      spec.omega0_rel = p.value("omega0_rel", 0.0);
      spec.bandwidth_rel = p.value("bandwidth_rel", 1.0);
      spec.t0_rel = p.value("t0_rel", 0.0);
      if (p.contains("polarization")) {
        spec.polarization = parse_polarization(p.at("polarization"));
      }
      cfg.photons.push_back(spec);
    }
    cfg.delta_t_rel = doc.value("delta_t_rel", 0.0);
    if (doc.contains("tolerances")) {
      const auto& t = doc.at("tolerances");
      cfg.tolerances.unitarity = t.value("unitarity", cfg.tolerances.unitarity);
      cfg.tolerances.normalization = t.value("normalization", cfg.tolerances.normalization);
      cfg.tolerances.quadrature_rel = t.value("quadrature_rel", cfg.tolerances.quadrature_rel);
    }
    cfg.mean_time = doc.value("mean_time", std::string("marginal"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field error: ") + e.what());
  }

  if (cfg.photons.size() != cfg.input_ports.size()) {
    throw ValidationError("photon count (" + std::to_string(cfg.photons.size()) +
                          ") must equal input port count (" +
                          std::to_string(cfg.input_ports.size()) + ")");
  }
  cfg.tolerances.validate();
  for (const auto& p : cfg.photons) {
    if (!(p.bandwidth_rel > 0.0)) {
      throw NonPositiveBandwidthError("photon bandwidth_rel must be positive");
    }
  }
  parse_mean_time(cfg.mean_time);  // validate the switch
  cfg.canonical_json = doc.dump();
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open config file '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
  return parse_config_document(doc);
}

ExperimentConfig parse_config_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return parse_config_document(doc);
}

InterferometerUnitary build_network(const std::string& spec, double unitarity_tol) {
  if (spec == "beamsplitter") {
    return beamsplitter();
  }
  if (spec == "tritter_fig2a") {
    return tritter_fig2a();
  }
  if (spec.rfind("fourier:", 0) == 0) {
    return fourier_multiport(std::stoi(spec.substr(8)));
  }
  if (spec.rfind("haar:", 0) == 0) {
    const std::string rest = spec.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      throw ValidationError("haar builder needs 'haar:M:seed'");
    }
    const int m = std::stoi(rest.substr(0, colon));
    const auto seed = static_cast<std::uint64_t>(std::stoull(rest.substr(colon + 1)));
    return haar_random(m, seed);
  }
  if (spec.rfind("file:", 0) == 0) {
    return InterferometerUnitary(load_unitary_json(spec.substr(5)), unitarity_tol);
  }
  throw ValidationError("unknown network '" + spec +
                        "' (expected beamsplitter, tritter_fig2a, fourier:M, haar:M:seed, "
                        "or file:path)");
}

Eigen::MatrixXcd load_unitary_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open unitary file '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("unitary '" + path + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc.at("entries").is_array()) {
    throw ParseError("unitary file must contain an 'entries' array of [re, im] pairs");
  }
  const auto& entries = doc.at("entries");
  const auto count = entries.size();
  const auto m = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(count))));
  if (m < 1 || static_cast<std::size_t>(m * m) != count) {
    throw ValidationError("unitary entry count " + std::to_string(count) +
                          " is not a perfect square");
  }
  if (doc.contains("M") && doc.at("M").get<Eigen::Index>() != m) {
    throw ValidationError("unitary 'M' field disagrees with the entry count");
  }
  Eigen::MatrixXcd u(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& e = entries[static_cast<std::size_t>(i * m + j)];
      if (!e.is_array() || e.size() != 2) {
        throw ParseError("unitary entries must be [re, im] pairs");
      }
      u(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return u;
}

Experiment build_experiment(const ExperimentConfig& config) {
  InterferometerUnitary network = build_network(config.network_spec,
                                                config.tolerances.unitarity);
  std::vector<PortIndex> ports0;
  ports0.reserve(config.input_ports.size());
  for (int p : config.input_ports) {
    ports0.push_back(p - 1);  // 1-based in files, 0-based in code
  }
  PortSample inputs = make_port_sample(ports0, network.port_count());

  // keep photons aligned with the sorted sample
  std::vector<std::pair<int, const PhotonSpec*>> order;
  order.reserve(config.photons.size());
  for (std::size_t i = 0; i < config.photons.size(); ++i) {
    order.emplace_back(config.input_ports[i] - 1, &config.photons[i]);
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<SpectralAmplitude> photons;
  photons.reserve(order.size());
  for (const auto& [port, spec] : order) {
    photons.push_back(gaussian_photon(spec->omega0_rel, spec->bandwidth_rel, spec->t0_rel,
                                      spec->polarization));
  }
  return Experiment(std::move(network), std::move(inputs), std::move(photons),
                    config.delta_t_rel, config.tolerances);
}

MeanTimeReduction parse_mean_time(const std::string& text) {
  MeanTimeReduction reduction;
  if (text == "marginal" || text.empty()) {
    reduction.mode = MeanTimeReduction::Mode::marginal;
    return reduction;
  }
  if (text.rfind("fixed:", 0) == 0) {
    reduction.mode = MeanTimeReduction::Mode::fixed;
    try {
      reduction.fixed_t = std::stod(text.substr(6));
    } catch (const std::exception&) {
      throw ValidationError("mean_time 'fixed:<t>' needs a numeric t");
    }
    return reduction;
  }
  throw ValidationError("mean_time must be 'marginal' or 'fixed:<t>', got '" + text + "'");
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config.canonical_json) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace mbci
