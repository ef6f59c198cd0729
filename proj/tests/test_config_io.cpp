#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mbci/config.hpp"
#include "mbci/io.hpp"
#include "mbci/permanent.hpp"

using namespace mbci;

#ifndef MBCI_CONFIG_DIR
#define MBCI_CONFIG_DIR "configs"
#endif

TEST_SUITE("config_io") {

TEST_CASE("bundled fig2b config") {
  const ExperimentConfig cfg = parse_config(std::string(MBCI_CONFIG_DIR) + "/fig2b.json");
  CHECK(cfg.network_spec == "tritter_fig2a");
  REQUIRE(cfg.photons.size() == 3);
  CHECK(cfg.photons[0].omega0_rel == 0.0);
  CHECK(cfg.photons[1].omega0_rel == 8.0);
  CHECK(cfg.photons[2].omega0_rel == 12.7);
  const Experiment exp = build_experiment(cfg);
  CHECK(exp.network().port_count() == 3);
  CHECK(exp.photon_count() == 3);
  CHECK(std::abs(jones_inner(exp.photon(0).polarization(), jones_h()) - Complex(1, 0)) <
        1e-14);
}

TEST_CASE("bundled fig2d config") {
  const ExperimentConfig cfg = parse_config(std::string(MBCI_CONFIG_DIR) + "/fig2d.json");
  CHECK(cfg.network_spec == "fourier:3");
  CHECK(cfg.delta_t_rel == 0.0);
  const Experiment exp = build_experiment(cfg);
  CHECK(std::abs(jones_inner(exp.photon(2).polarization(), jones_v()) - Complex(1, 0)) <
        1e-14);
}

TEST_CASE("config validation failures") {
  CHECK_THROWS_AS(parse_config_string(R"({"network": "beamsplitter",
    "input_ports": [1, 2], "photons": [{}]})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_config_string("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_config_string(R"({"input_ports": [1], "photons": [{}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_config_string(R"({"network": "beamsplitter", "input_ports": [1],
    "photons": [{"bandwidth_rel": -1}]})"),
                  NonPositiveBandwidthError);
  CHECK_THROWS_AS(parse_config_string(R"({"network": "beamsplitter", "input_ports": [1],
    "photons": [{"polarization": "diagonal"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_config_string(R"({"network": "beamsplitter", "input_ports": [1],
    "photons": [{}], "mean_time": "sometimes"})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(std::string(MBCI_CONFIG_DIR) + "/missing.json"), ParseError);
}

TEST_CASE("polarization forms") {
  const ExperimentConfig cfg = parse_config_string(R"({
    "network": "fourier:4",
    "input_ports": [1, 2, 3],
    "photons": [
      {"polarization": "linear:45"},
      {"polarization": [[0.70710678118654752, 0], [0, 0.70710678118654752]]},
      {"polarization": "V"}
    ]})");
  const Experiment exp = build_experiment(cfg);
  CHECK(exp.photon(0).polarization().e1.real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(exp.photon(1).polarization().e2.imag() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("photons follow their ports when the port list is unsorted") {
  const ExperimentConfig cfg = parse_config_string(R"({
    "network": "fourier:4",
    "input_ports": [3, 1],
    "photons": [{"omega0_rel": 5.0}, {"omega0_rel": 1.0}]})");
  const Experiment exp = build_experiment(cfg);
  // sorted sample is {0, 2}; the 1.0-offset photon sits on port 1 (index 0)
  CHECK(exp.input_sample()[0] == 0);
  CHECK(exp.input_sample()[1] == 2);
  CHECK(exp.photon(0).source().gaussian().center_frequency == doctest::Approx(1.0));
  CHECK(exp.photon(1).source().gaussian().center_frequency == doctest::Approx(5.0));
}

TEST_CASE("network builders from spec strings") {
  CHECK(build_network("beamsplitter").port_count() == 2);
  CHECK(build_network("tritter_fig2a").port_count() == 3);
  CHECK(build_network("fourier:5").port_count() == 5);
  const InterferometerUnitary h = build_network("haar:4:77");
  CHECK((h.matrix() - haar_random(4, 77).matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_network("mysterybox"), ValidationError);
  CHECK_THROWS_AS(build_network("haar:4"), ValidationError);
}

TEST_CASE("unitary file round trip") {
  const std::string path = "test_unitary_roundtrip.json";
  const Eigen::MatrixXcd u = haar_random(3, 5).matrix();
  {
    std::ofstream out(path);
    out << "{\"M\": 3, \"entries\": [";
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i + j > 0) {
          out << ",";
        }
        out << "[" << format_double(u(i, j).real()) << "," << format_double(u(i, j).imag())
            << "]";
      }
    }
    out << "]}";
  }
  const Eigen::MatrixXcd loaded = load_unitary_json(path);
  CHECK((loaded - u).cwiseAbs().maxCoeff() < 1e-15);
  const InterferometerUnitary net = build_network("file:" + path);
  CHECK(net.port_count() == 3);
  std::remove(path.c_str());

  // non-square entry counts are rejected
  {
    std::ofstream out(path);
    out << "{\"entries\": [[1,0],[0,0],[0,0]]}";
  }
  CHECK_THROWS_AS(load_unitary_json(path), ValidationError);
  std::remove(path.c_str());
}

TEST_CASE("config hash is stable and input sensitive") {
  const std::string text = R"({"network": "beamsplitter", "input_ports": [1, 2],
    "photons": [{}, {"omega0_rel": 1.0}]})";
  const ExperimentConfig a = parse_config_string(text);
  const ExperimentConfig b = parse_config_string(text);
  CHECK(config_hash(a) == config_hash(b));

  const ExperimentConfig c = parse_config_string(R"({"network": "beamsplitter",
    "input_ports": [1, 2], "photons": [{}, {"omega0_rel": 1.5}]})");
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("grid csv carries axes, metadata, and exact doubles") {
  Grid2D grid;
  grid.x = Eigen::VectorXd::LinSpaced(3, -1.0, 1.0);
  grid.y = Eigen::VectorXd::LinSpaced(2, 0.0, 0.1);
  grid.values.resize(3, 2);
  grid.values << 0.1, 1.0 / 3.0, 2e-17, 4.0, 5.5, 0.0;

  ArtifactMetadata meta{"landscape", "deadbeef", "tau21", "tau32"};
  std::ostringstream out;
  write_grid_csv(out, grid, meta);
  const std::string text = out.str();
  CHECK(text.find("# mbci landscape") != std::string::npos);
  CHECK(text.find("# config_hash: deadbeef") != std::string::npos);

  // values round-trip exactly through the printed representation
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);  // axis row
  std::getline(in, line);  // first data row
  std::stringstream row(line);
  std::string cell;
  std::getline(row, cell, ',');
  CHECK(std::stod(cell) == grid.x(0));
  std::getline(row, cell, ',');
  CHECK(std::stod(cell) == grid.values(0, 0));
  std::getline(row, cell, ',');
  CHECK(std::stod(cell) == grid.values(0, 1));

  // byte-identical reproduction
  std::ostringstream again;
  write_grid_csv(again, grid, meta);
  CHECK(again.str() == text);

  std::ostringstream js;
  write_grid_json(js, grid, meta);
  CHECK(js.str().find("\"config_hash\": \"deadbeef\"") != std::string::npos);
}

TEST_CASE("pav table output forms") {
  const PavTable table = pav_table(beamsplitter(), full_port_sample(2),
                                   GramMatrix(Eigen::MatrixXcd::Identity(2, 2)));
  ArtifactMetadata meta{"pav", "cafe"};
  std::ostringstream csv;
  write_pav_csv(csv, table, meta);
  CHECK(csv.str().find("1 2,0.5") != std::string::npos);
  CHECK(csv.str().find("# total_mass: 0.5") != std::string::npos);

  std::ostringstream js;
  write_pav_json(js, table, meta);
  CHECK(js.str().find("\"total_mass\": 0.5") != std::string::npos);
}

}  // TEST_SUITE
