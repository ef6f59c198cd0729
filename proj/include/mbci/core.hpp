#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Foundational value types shared by every module: port samples, Jones
// polarization vectors, numeric tolerances, and the error taxonomy.
// All types here are immutable values and safe to share between threads.

namespace mbci {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Errors. ValidationError covers bad inputs and violated invariants (CLI exit
// code 2); NumericError covers runtime numeric failures (CLI exit code 3).

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class DuplicatePortError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SizeMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotSquareError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonPositiveBandwidthError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NormalizationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TooLargeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class GridTooFineError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class QuadratureFailureError : public NumericError {
 public:
  using NumericError::NumericError;
};

class RejectionBudgetError : public NumericError {
 public:
  using NumericError::NumericError;
};

class EnvelopeViolationError : public NumericError {
 public:
  using NumericError::NumericError;
};

// ---------------------------------------------------------------------------

/// Numeric tolerances threaded through validation and quadrature.
struct Tolerances {
  double unitarity = 1e-10;
  double normalization = 1e-8;
  double quadrature_rel = 1e-9;

  void validate() const {
    if (unitarity <= 0 || normalization <= 0 || quadrature_rel <= 0) {
      throw ValidationError("tolerances must be strictly positive");
    }
  }
};

/// Ports are 0-based in code, 1-based in all file and CLI I/O.
using PortIndex = int;

/// An ordered sample of N distinct ports of an M-port network. Entries are
/// kept strictly increasing; bunched detection (repeated ports) is rejected.
class PortSample {
 public:
  PortSample() = default;

  int size() const { return static_cast<int>(ports_.size()); }
  int port_count() const { return port_count_; }
  PortIndex operator[](int i) const { return ports_[static_cast<std::size_t>(i)]; }
  const std::vector<PortIndex>& ports() const { return ports_; }

  bool operator==(const PortSample& other) const = default;

  friend PortSample make_port_sample(std::vector<PortIndex> indices, int port_count);

 private:
  std::vector<PortIndex> ports_;
  int port_count_ = 0;
};

/// Sorts and validates a port sample (the paper's sets S and D).
PortSample make_port_sample(std::vector<PortIndex> indices, int port_count);

/// All ports of an M-port network, i.e. {0, ..., M-1}.
PortSample full_port_sample(int port_count);

// ---------------------------------------------------------------------------

/// Normalized complex polarization vector in a fixed transverse basis
/// {e1, e2}. Construction normalizes; a zero vector is rejected.
struct JonesVector {
  Complex e1{1.0, 0.0};
  Complex e2{0.0, 0.0};

  JonesVector() = default;
  JonesVector(Complex a, Complex b);

  Eigen::Vector2cd vec() const { return {e1, e2}; }
};

/// Linear polarization at the given angle from e1; 0 is H, pi/2 is V.
JonesVector linear_polarization(double angle);

JonesVector jones_h();
JonesVector jones_v();

/// Hermitian inner product <a|b>, conjugating the first (detector) argument.
Complex jones_inner(const JonesVector& a, const JonesVector& b);

/// A Jones vector orthogonal to the given one.
JonesVector jones_orthogonal(const JonesVector& a);

}  // namespace mbci
