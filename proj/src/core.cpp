#include "mbci/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mbci {

PortSample make_port_sample(std::vector<PortIndex> indices, int port_count) {
  if (indices.empty()) {
    throw ValidationError("port sample must contain at least one port");
  }
  if (port_count < 1) {
    throw ValidationError("port count must be at least 1");
  }
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 0; i + 1 < indices.size(); ++i) {
    if (indices[i] == indices[i + 1]) {
      throw DuplicatePortError("duplicate port " + std::to_string(indices[i]) +
                               " in sample (bunched detection is not modeled)");
    }
  }
  if (indices.front() < 0 || indices.back() >= port_count) {
    throw OutOfRangeError("port index outside [0, " + std::to_string(port_count) + ")");
  }
  PortSample sample;
  sample.ports_ = std::move(indices);
  sample.port_count_ = port_count;
  return sample;
}

PortSample full_port_sample(int port_count) {
  std::vector<PortIndex> all(static_cast<std::size_t>(port_count));
  std::iota(all.begin(), all.end(), 0);
  return make_port_sample(std::move(all), port_count);
}

JonesVector::JonesVector(Complex a, Complex b) : e1(a), e2(b) {
  const double norm = std::sqrt(std::norm(e1) + std::norm(e2));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("Jones vector must be nonzero and finite");
  }
  e1 /= norm;
  e2 /= norm;
}

JonesVector linear_polarization(double angle) {
  return JonesVector(std::cos(angle), std::sin(angle));
}

JonesVector jones_h() { return JonesVector(1.0, 0.0); }
JonesVector jones_v() { return JonesVector(0.0, 1.0); }

Complex jones_inner(const JonesVector& a, const JonesVector& b) {
  return std::conj(a.e1) * b.e1 + std::conj(a.e2) * b.e2;
}

JonesVector jones_orthogonal(const JonesVector& a) {
  return JonesVector(-std::conj(a.e2), std::conj(a.e1));
}

}  // namespace mbci
