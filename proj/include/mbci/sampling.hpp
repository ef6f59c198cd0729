#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mbci/averaged.hpp"
#include "mbci/correlation.hpp"
#include "mbci/core.hpp"
#include "mbci/stats.hpp"

// Exact sampling of complete detection events (output sample, detection
// times, basis polarizations) from the time- and polarization-resolved rate,
// by rejection against a permutation-mixture envelope.
//
// Cauchy-Schwarz over the N! permutation amplitudes bounds the rate:
//   |perm T|^2 <= N! sum_sigma prod_d |T(d, sigma(d))|^2,
// and each bound term factorizes into |U|^2, a polarization projection, and a
// normalized single-photon time density. Proposals therefore draw
// (D, sigma, lambda, t) from the closed-form mixture and accept with
// probability rate/envelope, which is exact. The sampler conditions on
// collision-free outcomes (at most one photon per detected port, as in the
// underlying model) and reports the collision-free mass.

namespace mbci {

struct SamplerConfig {
  Experiment experiment;
  std::uint64_t seed = 0;
  std::uint64_t max_rejections_per_sample = 1'000'000;
};

/// One envelope mixture component: a detector-to-photon assignment sigma, a
/// basis outcome (bit d of lambda_mask selects e2 at detector d), and the
/// component's total integral N! prod_d |U|^2 |<e_lambda, eps>|^2.
struct EnvelopeTerm {
  Permutation sigma;
  unsigned lambda_mask = 0;
  double weight = 0.0;
};

std::vector<EnvelopeTerm> envelope_term_weights(const Experiment& exp,
                                                const PortSample& outputs,
                                                const PolarizationBasis& basis = {});

struct SampledEvent {
  DetectionEvent event;
  std::vector<int> polarization_indices;  // 0 -> basis.e1, 1 -> basis.e2
};

struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t acceptances = 0;

  double acceptance_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(acceptances) / static_cast<double>(proposals);
  }
};

struct SampleBatch {
  std::vector<SampledEvent> events;
  RejectionStats stats;
  double collision_free_mass = 0.0;
};

class CorrelationSampler {
 public:
  explicit CorrelationSampler(SamplerConfig config, PolarizationBasis basis = {});

  const PavTable& table() const { return table_; }
  double collision_free_mass() const { return table_.total_mass; }
  const SamplerConfig& config() const { return config_; }

  /// Draws one event from the given stream; throws RejectionBudgetError when
  /// the per-event proposal budget runs out.
  SampledEvent sample_event(std::mt19937_64& rng, RejectionStats* stats = nullptr) const;

  /// Deterministic batch: event i uses a stream derived from (seed, i), so
  /// the same seed reproduces the same batch regardless of thread count.
  SampleBatch sample_batch(std::uint64_t count) const;

 private:
  struct TimeProposal {
    bool gaussian = true;
    double center = 0.0;
    double sigma = 1.0;
    // histogram proposal for sampled spectra (one transform period)
    double t_start = 0.0;
    double dt = 0.0;
    std::vector<double> cell_density;  // piecewise-constant pdf
    std::vector<double> cdf;           // cumulative over cells
    double envelope_scale = 1.0;       // >= sup |chi|^2 / pdf on the window
  };

  double proposal_density(int photon, double t) const;
  double draw_time(int photon, std::mt19937_64& rng) const;

  SamplerConfig config_;
  PolarizationBasis basis_;
  PavTable table_;
  std::vector<PortSample> output_samples_;
  std::vector<double> output_cdf_;  // cumulative envelope masses over D
  double total_envelope_mass_ = 0.0;
  Eigen::MatrixXd pol_weights_;  // (2, N): |<e_lambda, eps_s>|^2
  std::vector<TimeProposal> time_proposals_;
  double n_factorial_ = 1.0;
};

/// Convenience wrapper; builds the sampler (including its P_av table) once.
SampleBatch sample_batch(const SamplerConfig& config, std::uint64_t count,
                         const PolarizationBasis& basis = {});

/// Pearson chi-square of empirical output-sample counts against the averaged
/// probability table renormalized to its collision-free mass.
ChiSquareResult empirical_check(const SampleBatch& batch, const PavTable& table);

}  // namespace mbci
