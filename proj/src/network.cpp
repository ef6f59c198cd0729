#include "mbci/network.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace mbci {

UnitarityReport check_unitary(const Eigen::MatrixXcd& u, double tol) {
  if (u.rows() != u.cols()) {
    throw NotSquareError("unitary check requires a square matrix");
  }
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  UnitarityReport report;
  report.max_deviation = (gram - identity).cwiseAbs().maxCoeff();
  report.ok = report.max_deviation <= tol;
  return report;
}

InterferometerUnitary::InterferometerUnitary(Eigen::MatrixXcd u, double unitarity_tol)
    : u_(std::move(u)) {
  const UnitarityReport report = check_unitary(u_, unitarity_tol);
  if (!report.ok) {
    throw ValidationError("matrix is not unitary: max |U^dag U - I| = " +
                          std::to_string(report.max_deviation));
  }
}

InterferometerUnitary beamsplitter() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd u(2, 2);
  u << Complex(r, 0), Complex(0, r),  //
      Complex(0, r), Complex(r, 0);
  return InterferometerUnitary(std::move(u), 1e-14);
}

InterferometerUnitary tritter_fig2a() {
  const double s3 = std::sqrt(3.0);
  const double r = 1.0 / s3;
  Eigen::MatrixXcd u(3, 3);
  u << Complex(r, 0), Complex(0, r), Complex(0, -r),                              //
      Complex(0, r), Complex(r * (1 - s3) / 2, 0), Complex(-r * (1 + s3) / 2, 0),  //
      Complex(0, r), Complex(r * (s3 + 1) / 2, 0), Complex(r * (s3 - 1) / 2, 0);
  return InterferometerUnitary(std::move(u), 1e-12);
}

InterferometerUnitary fourier_multiport(int port_count) {
  if (port_count < 2) {
    throw ValidationError("fourier multiport requires at least 2 ports");
  }
  const double r = 1.0 / std::sqrt(static_cast<double>(port_count));
  Eigen::MatrixXcd u(port_count, port_count);
  for (int d = 0; d < port_count; ++d) {
    for (int s = 0; s < port_count; ++s) {
      // 1-based d*s exponents, exactly as the symmetric-tritter matrix is
      // written; a row/column permutation of the 0-based DFT matrix.
      const double phase = 2.0 * std::numbers::pi *
                           static_cast<double>((d + 1) * (s + 1)) /
                           static_cast<double>(port_count);
      u(d, s) = r * std::polar(1.0, phase);
    }
  }
  return InterferometerUnitary(std::move(u), 1e-12);
}

InterferometerUnitary haar_random(int port_count, std::uint64_t seed) {
  if (port_count < 1) {
    throw ValidationError("haar_random requires at least 1 port");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd z(port_count, port_count);
  for (int i = 0; i < port_count; ++i) {
    for (int j = 0; j < port_count; ++j) {
      z(i, j) = Complex(gauss(rng), gauss(rng));
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the gauge: scale columns by the phase of R's diagonal so the
  // distribution is exactly Haar rather than QR-convention dependent.
  for (int j = 0; j < port_count; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0) ? (d / mag) : Complex(1, 0);
  }
  return InterferometerUnitary(std::move(q), 1e-10);
}

Submatrix submatrix(const InterferometerUnitary& u, const PortSample& outputs,
                    const PortSample& inputs) {
  if (outputs.size() != inputs.size()) {
    throw SizeMismatchError("submatrix requires |D| = |S|");
  }
  if (outputs.port_count() != u.port_count() || inputs.port_count() != u.port_count()) {
    throw SizeMismatchError("port samples refer to a different network size");
  }
  const int n = outputs.size();
  Submatrix sub;
  sub.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      sub.entries(i, j) = u(outputs[i], inputs[j]);
    }
  }
  sub.rows = outputs;
  sub.cols = inputs;
  return sub;
}

}  // namespace mbci
