#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "mbci/core.hpp"

// Interferometer unitaries: validation, the named builders used throughout
// the accompanying experiments, Haar-random generation, and extraction of the
// N x N submatrix U^(D,S) connecting an input sample to an output sample.

namespace mbci {

struct UnitarityReport {
  bool ok = false;
  double max_deviation = 0.0;
};

/// Entrywise max |(U^dag U - I)_ij| against the given tolerance.
UnitarityReport check_unitary(const Eigen::MatrixXcd& u, double tol);

/// An M-port passive linear network. The matrix is validated to be unitary
/// on construction.
class InterferometerUnitary {
 public:
  explicit InterferometerUnitary(Eigen::MatrixXcd u, double unitarity_tol = 1e-10);

  int port_count() const { return static_cast<int>(u_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return u_; }
  Complex operator()(PortIndex d, PortIndex s) const { return u_(d, s); }

 private:
  Eigen::MatrixXcd u_;
};

/// Balanced 2-port splitter (1/sqrt2) [[1, i], [i, 1]]; its permanent is 0.
InterferometerUnitary beamsplitter();

/// The permanent-zero tritter:
///   (1/sqrt3) [ 1        i             -i
///               i   (1-sqrt3)/2  -(1+sqrt3)/2
///               i   (sqrt3+1)/2   (sqrt3-1)/2 ].
InterferometerUnitary tritter_fig2a();

/// Symmetric M-port multiport, entries exp(i 2 pi d s / M)/sqrt(M) with
/// 1-based d, s. M = 3 is the symmetric tritter.
InterferometerUnitary fourier_multiport(int port_count);

/// Haar-measure random unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phase correction. Deterministic for a given seed.
InterferometerUnitary haar_random(int port_count, std::uint64_t seed);

struct Submatrix {
  Eigen::MatrixXcd entries;  // entries(i, j) = U(rows[i], cols[j])
  PortSample rows;           // output sample D
  PortSample cols;           // input sample S
};

/// U^(D,S): rows indexed by the output sample, columns by the input sample.
Submatrix submatrix(const InterferometerUnitary& u, const PortSample& outputs,
                    const PortSample& inputs);

}  // namespace mbci
