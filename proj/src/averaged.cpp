#include "mbci/averaged.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mbci/parallel.hpp"
#include "mbci/permanent.hpp"
#include "mbci/quadrature.hpp"

namespace mbci {

void validate_permutation(const Permutation& rho, int n) {
  if (static_cast<int>(rho.size()) != n) {
    throw SizeMismatchError("permutation size mismatch");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : rho) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
      throw ValidationError("not a permutation of {0..N-1}");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Complex overlap_factor(const GramMatrix& g, const Permutation& rho) {
  validate_permutation(rho, g.size());
  Complex f(1, 0);
  for (int s = 0; s < g.size(); ++s) {
    f *= g(s, rho[static_cast<std::size_t>(s)]);
  }
  return f;
}

Eigen::MatrixXcd interference_matrix(const InterferometerUnitary& u, const PortSample& outputs,
                                     const PortSample& inputs, const Permutation& rho) {
  if (outputs.size() != inputs.size()) {
    throw SizeMismatchError("interference_matrix requires |D| = |S|");
  }
  const int n = inputs.size();
  validate_permutation(rho, n);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = std::conj(u(outputs[i], inputs[j])) *
                u(outputs[i], inputs[rho[static_cast<std::size_t>(j)]]);
    }
  }
  return a;
}

namespace {

Permutation inverse_permutation(const Permutation& rho) {
  Permutation inv(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    inv[static_cast<std::size_t>(rho[i])] = static_cast<int>(i);
  }
  return inv;
}

}  // namespace

AveragedResult averaged_probability(const InterferometerUnitary& u, const PortSample& outputs,
                                    const PortSample& inputs, const GramMatrix& g) {
  if (outputs.size() != inputs.size() || inputs.size() != g.size()) {
    throw SizeMismatchError("averaged_probability requires |D| = |S| = dim(g)");
  }
  const int n = inputs.size();
  if (n > 10) {
    throw TooLargeError("averaged_probability limited to N <= 10 (N! 2^N cost)");
  }

  AveragedResult result;
  const bool keep_terms = n <= 7;

  Permutation rho(static_cast<std::size_t>(n));
  std::iota(rho.begin(), rho.end(), 0);
  double value = 0.0;
  do {
    const Permutation inv = inverse_permutation(rho);
    // accumulate each {rho, rho^-1} pair once; the pair sum is real
    if (!std::lexicographical_compare(inv.begin(), inv.end(), rho.begin(), rho.end())) {
      const Complex term =
          overlap_factor(g, rho) * permanent_ryser(interference_matrix(u, outputs, inputs, rho));
      value += (inv == rho) ? term.real() : 2.0 * term.real();
      if (keep_terms) {
        result.terms.emplace_back(rho, term);
        if (inv != rho) {
          result.terms.emplace_back(inv, std::conj(term));
        }
      }
    }
  } while (std::next_permutation(rho.begin(), rho.end()));

  result.value = value;
  return result;
}

double averaged_probability_distinguishable(const InterferometerUnitary& u,
                                            const PortSample& outputs,
                                            const PortSample& inputs) {
  const Submatrix sub = submatrix(u, outputs, inputs);
  const Eigen::MatrixXd probs = sub.entries.cwiseAbs2();
  return permanent_ryser(probs);
}

double averaged_probability_ideal(const InterferometerUnitary& u, const PortSample& outputs,
                                  const PortSample& inputs) {
  return std::norm(permanent_ryser(submatrix(u, outputs, inputs).entries));
}

namespace {

// all C(M, N) strictly increasing samples, lexicographic
std::vector<PortSample> all_output_samples(int port_count, int n) {
  std::vector<PortSample> samples;
  std::vector<PortIndex> pick(static_cast<std::size_t>(n));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    samples.push_back(make_port_sample(pick, port_count));
    int i = n - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == port_count - n + i) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return samples;
}

double binomial(int m, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) {
    r *= static_cast<double>(m - i) / static_cast<double>(i + 1);
  }
  return r;
}

}  // namespace

PavTable pav_table(const InterferometerUnitary& u, const PortSample& inputs,
                   const GramMatrix& g) {
  const int m = u.port_count();
  const int n = inputs.size();
  if (binomial(m, n) > 1e6) {
    throw TooLargeError("pav_table limited to C(M,N) <= 1e6");
  }
  const std::vector<PortSample> outputs = all_output_samples(m, n);

  PavTable table;
  table.entries.resize(outputs.size());
  parallel_for(outputs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      table.entries[i] = {outputs[i], averaged_probability(u, outputs[i], inputs, g).value};
    }
  });
  double mass = 0.0;
  for (const auto& [sample, p] : table.entries) {
    mass += p;
  }
  table.total_mass = mass;
  return table;
}

double pav_quadrature_oracle(const Experiment& exp, const PortSample& outputs,
                             const PolarizationBasis& basis) {
  const int n = exp.photon_count();
  if (n > 3) {
    throw TooLargeError("pav_quadrature_oracle limited to N <= 3");
  }
  if (outputs.size() != n) {
    throw SizeMismatchError("output sample size must equal the photon number");
  }

  // one time window covering every photon, reused for each detector axis
  double lo = exp.photon(0).window().center;
  double hi = lo;
  double sigma = 0.0;
  for (const auto& chi : exp.photons()) {
    lo = std::min(lo, chi.window().center);
    hi = std::max(hi, chi.window().center);
    sigma = std::max(sigma, chi.window().sigma);
  }
  lo -= 10.0 * sigma;
  hi += 10.0 * sigma;

  const double rel = exp.tolerances().quadrature_rel;

  double total = 0.0;
  std::vector<JonesVector> pols(static_cast<std::size_t>(n));
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    for (int d = 0; d < n; ++d) {
      pols[static_cast<std::size_t>(d)] = ((mask >> d) & 1u) ? basis.e2 : basis.e1;
    }
    DetectionEvent event{outputs, std::vector<double>(static_cast<std::size_t>(n), 0.0), pols};

    // nested 1D integrals over t_1 .. t_N, innermost varying fastest
    std::function<double(int)> integrate_axis = [&](int axis) -> double {
      QuadratureOptions opts;
      // keep inner levels tighter than the outer one
      opts.rel_tol = rel * std::pow(0.1, n - 1 - axis);
      opts.abs_tol = 1e-13;
      opts.initial_intervals = 32;
      return integrate_adaptive_real(
          [&](double t) {
            event.times[static_cast<std::size_t>(axis)] = t;
            return (axis + 1 == n) ? rate(exp, event) : integrate_axis(axis + 1);
          },
          lo, hi, opts);
    };
    total += integrate_axis(0);
  }
  return total;
}

}  // namespace mbci
