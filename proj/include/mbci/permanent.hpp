#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mbci/core.hpp"
#include "mbci/parallel.hpp"

// Permanents of dense square matrices: the computational kernel behind every
// detection probability in this library. permanent_ryser is the production
// path (Ryser inclusion-exclusion with Gray-code row-sum updates, O(2^n n)
// time and O(n) extra space); permanent_naive enumerates all n! permutations
// and exists to cross-validate it.
//
// The permanent of the empty (0x0) matrix is 1 by the empty-product
// convention, which the recursive expansion identities require.

namespace mbci {

enum class PermanentMethod { ryser, naive };

struct PermanentResult {
  Complex value;
  int n = 0;
  PermanentMethod method = PermanentMethod::ryser;
};

namespace detail {

// Kahan-compensated accumulator; 2^n-term alternating sums shed digits
// without it.
template <typename Scalar>
struct CompensatedSum {
  Scalar sum{};
  Scalar carry{};

  void add(Scalar value) {
    const Scalar y = value - carry;
    const Scalar t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

/// Direct permutation-sum permanent, sum_sigma prod_i A(i, sigma(i)).
/// Guarded at n <= 10; use permanent_ryser beyond toy sizes.
template <typename Derived>
typename Derived::Scalar permanent_naive(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) {
    throw NotSquareError("permanent requires a square matrix");
  }
  const int n = static_cast<int>(a.rows());
  if (n > 10) {
    throw TooLargeError("permanent_naive limited to n <= 10, got n = " + std::to_string(n));
  }
  if (n == 0) {
    return Scalar(1);
  }
  std::vector<int> cols(static_cast<std::size_t>(n));
  std::iota(cols.begin(), cols.end(), 0);
  detail::CompensatedSum<Scalar> acc;
  do {
    Scalar prod = a(0, cols[0]);
    for (int i = 1; i < n; ++i) {
      prod *= a(i, cols[static_cast<std::size_t>(i)]);
    }
    acc.add(prod);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return acc.sum;
}

/// Ryser's formula with Gray-code updates:
///   perm(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} A(i, j).
/// Consecutive subsets differ in one column, so the row sums are updated
/// incrementally. The outer sum is Kahan-compensated.
template <typename Derived>
typename Derived::Scalar permanent_ryser(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) {
    throw NotSquareError("permanent requires a square matrix");
  }
  const int n = static_cast<int>(a.rows());
  if (n > 63) {
    throw TooLargeError("permanent_ryser limited to n <= 63, got n = " + std::to_string(n));
  }
  if (n == 0) {
    return Scalar(1);
  }

  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = a;
  std::vector<Scalar> row_sums(static_cast<std::size_t>(n), Scalar(0));
  detail::CompensatedSum<Scalar> acc;

  const std::uint64_t count = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < count; ++k) {
    const std::uint64_t next_gray = k ^ (k >> 1);
    const int flipped = std::countr_zero(gray ^ next_gray);
    const bool added = (next_gray >> flipped) & 1u;
    gray = next_gray;

    if (added) {
      for (int i = 0; i < n; ++i) {
        row_sums[static_cast<std::size_t>(i)] += m(i, flipped);
      }
    } else {
      for (int i = 0; i < n; ++i) {
        row_sums[static_cast<std::size_t>(i)] -= m(i, flipped);
      }
    }

    Scalar prod = row_sums[0];
    for (int i = 1; i < n; ++i) {
      prod *= row_sums[static_cast<std::size_t>(i)];
    }
    if (std::popcount(gray) & 1) {
      acc.add(-prod);
    } else {
      acc.add(prod);
    }
  }
  const Scalar sign = (n % 2 == 0) ? Scalar(1) : Scalar(-1);
  return sign * acc.sum;
}

/// Elementwise permanent_ryser over a batch of same-size matrices, evaluated
/// data-parallel. Output i corresponds to input i.
template <typename Scalar>
std::vector<Scalar> permanent_batch(
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& matrices) {
  std::vector<Scalar> out(matrices.size());
  if (matrices.empty()) {
    return out;
  }
  const Eigen::Index n = matrices.front().rows();
  for (const auto& m : matrices) {
    if (m.rows() != n || m.cols() != n) {
      throw SizeMismatchError("permanent_batch requires matrices of uniform size");
    }
  }
  parallel_for(matrices.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = permanent_ryser(matrices[i]);
    }
  });
  return out;
}

inline PermanentResult compute_permanent(const Eigen::MatrixXcd& a,
                                         PermanentMethod method = PermanentMethod::ryser) {
  PermanentResult result;
  result.n = static_cast<int>(a.rows());
  result.method = method;
  result.value = (method == PermanentMethod::ryser) ? permanent_ryser(a) : permanent_naive(a);
  return result;
}

}  // namespace mbci
