#include "mbci/io.hpp"

#include <cstdio>

#include <json.hpp>

namespace mbci {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

namespace {

void write_metadata(std::ostream& out, const ArtifactMetadata& meta) {
  out << "# mbci " << meta.command << "\n";
  out << "# config_hash: " << meta.config_hash << "\n";
  out << "# axes: " << meta.x_name << " (rows), " << meta.y_name << " (cols)\n";
}

nlohmann::json metadata_json(const ArtifactMetadata& meta) {
  return nlohmann::json{{"command", meta.command},
                        {"config_hash", meta.config_hash},
                        {"x_name", meta.x_name},
                        {"y_name", meta.y_name}};
}

}  // namespace

void write_grid_csv(std::ostream& out, const Grid2D& grid, const ArtifactMetadata& meta) {
  write_metadata(out, meta);
  out << "0";
  for (Eigen::Index j = 0; j < grid.y.size(); ++j) {
    out << "," << format_double(grid.y(j));
  }
  out << "\n";
  for (Eigen::Index i = 0; i < grid.x.size(); ++i) {
    out << format_double(grid.x(i));
    for (Eigen::Index j = 0; j < grid.y.size(); ++j) {
      out << "," << format_double(grid.values(i, j));
    }
    out << "\n";
  }
}

void write_grid_json(std::ostream& out, const Grid2D& grid, const ArtifactMetadata& meta) {
  nlohmann::json doc;
  doc["metadata"] = metadata_json(meta);
  auto& x = doc["x"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < grid.x.size(); ++i) {
    x.push_back(grid.x(i));
  }
  auto& y = doc["y"] = nlohmann::json::array();
  for (Eigen::Index j = 0; j < grid.y.size(); ++j) {
    y.push_back(grid.y(j));
  }
  auto& rows = doc["values"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < grid.x.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < grid.y.size(); ++j) {
      row.push_back(grid.values(i, j));
    }
    rows.push_back(std::move(row));
  }
  out << doc.dump(2) << "\n";
}

void write_pav_csv(std::ostream& out, const PavTable& table, const ArtifactMetadata& meta) {
  out << "# mbci " << meta.command << "\n";
  out << "# config_hash: " << meta.config_hash << "\n";
  out << "# total_mass: " << format_double(table.total_mass) << "\n";
  out << "output_ports,probability\n";
  for (const auto& [sample, p] : table.entries) {
    for (int i = 0; i < sample.size(); ++i) {
      out << (i ? " " : "") << (sample[i] + 1);  // 1-based in I/O
    }
    out << "," << format_double(p) << "\n";
  }
}

void write_pav_json(std::ostream& out, const PavTable& table, const ArtifactMetadata& meta) {
  nlohmann::json doc;
  doc["metadata"] = metadata_json(meta);
  doc["total_mass"] = table.total_mass;
  auto& entries = doc["entries"] = nlohmann::json::array();
  for (const auto& [sample, p] : table.entries) {
    nlohmann::json ports = nlohmann::json::array();
    for (int i = 0; i < sample.size(); ++i) {
      ports.push_back(sample[i] + 1);
    }
    entries.push_back(nlohmann::json{{"ports", std::move(ports)}, {"probability", p}});
  }
  out << doc.dump(2) << "\n";
}

}  // namespace mbci
