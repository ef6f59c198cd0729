#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mbci/core.hpp"
#include "mbci/correlation.hpp"
#include "mbci/network.hpp"
#include "mbci/photonics.hpp"

// Correlation measurements that resolve neither detection times nor
// polarizations. Integrating the time-resolved rate over all detection times
// and summing over a polarization basis collapses to
//
//   P_av(D; S) = sum_rho f_rho(S) perm A_rho^(D,S),
//
// with overlap factors f_rho = prod_s g(s, rho(s)) built from the Gram matrix
// of pairwise wavepacket overlaps, and interference-type matrices
// A_rho = [conj(U_ds) U_d,rho(s)]. The identity permutation term is the
// classical (fully distinguishable) probability perm[|U_ds|^2]; with all
// overlaps equal to 1 the sum telescopes to |perm U^(D,S)|^2.

namespace mbci {

/// Image array of a bijection on {0..N-1}.
using Permutation = std::vector<int>;

void validate_permutation(const Permutation& rho, int n);

/// f_rho(S) = prod_s g(s, rho(s)); exactly 1 for the identity.
Complex overlap_factor(const GramMatrix& g, const Permutation& rho);

/// A_rho(d, s) = conj(U(D_d, S_s)) * U(D_d, S_rho(s)).
Eigen::MatrixXcd interference_matrix(const InterferometerUnitary& u, const PortSample& outputs,
                                     const PortSample& inputs, const Permutation& rho);

struct AveragedResult {
  double value = 0.0;
  // rho -> f_rho * perm A_rho, retained for diagnostics (N <= 7 only; the
  // term list grows as N!).
  std::vector<std::pair<Permutation, Complex>> terms;
};

/// Eq.-16-style permutation sum. rho and rho^-1 terms are conjugate pairs and
/// are accumulated together so the result is real by construction.
AveragedResult averaged_probability(const InterferometerUnitary& u, const PortSample& outputs,
                                    const PortSample& inputs, const GramMatrix& g);

/// Fully distinguishable limit: perm of the non-negative matrix [|U_ds|^2].
double averaged_probability_distinguishable(const InterferometerUnitary& u,
                                            const PortSample& outputs,
                                            const PortSample& inputs);

/// Complete-interference limit: |perm U^(D,S)|^2.
double averaged_probability_ideal(const InterferometerUnitary& u, const PortSample& outputs,
                                  const PortSample& inputs);

struct PavTable {
  std::vector<std::pair<PortSample, double>> entries;  // lexicographic in D
  double total_mass = 0.0;  // collision-free mass; the deficit is bunching
};

/// P_av over every collision-free output sample (all C(M,N) of them).
PavTable pav_table(const InterferometerUnitary& u, const PortSample& inputs,
                   const GramMatrix& g);

/// Direct nested quadrature of the time-resolved rate over all detection
/// times, summed over basis polarizations; validates averaged_probability
/// through an independent route. N <= 3.
double pav_quadrature_oracle(const Experiment& exp, const PortSample& outputs,
                             const PolarizationBasis& basis = {});

}  // namespace mbci
