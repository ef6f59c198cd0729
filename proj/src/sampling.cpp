#include "mbci/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "mbci/parallel.hpp"
#include "mbci/permanent.hpp"

namespace mbci {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) {
    f *= static_cast<double>(i);
  }
  return f;
}

double binomial(int m, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) {
    r *= static_cast<double>(m - i) / static_cast<double>(i + 1);
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// per-event derived stream: counter-based splitting of the batch seed
std::mt19937_64 event_stream(std::uint64_t seed, std::uint64_t event_index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(event_index + 1)));
}

}  // namespace

std::vector<EnvelopeTerm> envelope_term_weights(const Experiment& exp, const PortSample& outputs,
                                                const PolarizationBasis& basis) {
  const int n = exp.photon_count();
  if (outputs.size() != n) {
    throw SizeMismatchError("envelope_term_weights requires |D| = N");
  }
  Eigen::MatrixXd u_abs2(n, n);
  for (int d = 0; d < n; ++d) {
    for (int s = 0; s < n; ++s) {
      u_abs2(d, s) = std::norm(exp.network()(outputs[d], exp.input_sample()[s]));
    }
  }
  Eigen::MatrixXd pol(2, n);
  for (int s = 0; s < n; ++s) {
    pol(0, s) = std::norm(jones_inner(basis.e1, exp.photon(s).polarization()));
    pol(1, s) = std::norm(jones_inner(basis.e2, exp.photon(s).polarization()));
  }
  const double nfact = factorial(n);

  std::vector<EnvelopeTerm> terms;
  Permutation sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    double base = nfact;
    for (int d = 0; d < n; ++d) {
      base *= u_abs2(d, sigma[static_cast<std::size_t>(d)]);
    }
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      double w = base;
      for (int d = 0; d < n; ++d) {
        w *= pol((mask >> d) & 1u, sigma[static_cast<std::size_t>(d)]);
      }
      terms.push_back(EnvelopeTerm{sigma, mask, w});
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return terms;
}

CorrelationSampler::CorrelationSampler(SamplerConfig config, PolarizationBasis basis)
    : config_(std::move(config)), basis_(basis) {
  const Experiment& exp = config_.experiment;
  const int n = exp.photon_count();
  const int m = exp.network().port_count();
  if (n > 6) {
    throw TooLargeError("sampler limited to N <= 6 photons");
  }
  if (binomial(m, n) > 1e4) {
    throw TooLargeError("sampler limited to C(M,N) <= 1e4 output samples");
  }
  n_factorial_ = factorial(n);

  const GramMatrix g = gram_matrix(exp.photons(), exp.tolerances());
  table_ = pav_table(exp.network(), exp.input_sample(), g);

  // envelope mass per output sample: N! perm of the entrywise |U|^2 submatrix
  output_samples_.reserve(table_.entries.size());
  output_cdf_.reserve(table_.entries.size());
  double cumulative = 0.0;
  for (const auto& [sample, p_av] : table_.entries) {
    Eigen::MatrixXd u_abs2(n, n);
    for (int d = 0; d < n; ++d) {
      for (int s = 0; s < n; ++s) {
        u_abs2(d, s) = std::norm(exp.network()(sample[d], exp.input_sample()[s]));
      }
    }
    cumulative += n_factorial_ * permanent_ryser(u_abs2);
    output_samples_.push_back(sample);
    output_cdf_.push_back(cumulative);
  }
  total_envelope_mass_ = cumulative;

  pol_weights_.resize(2, n);
  for (int s = 0; s < n; ++s) {
    pol_weights_(0, s) = std::norm(jones_inner(basis_.e1, exp.photon(s).polarization()));
    pol_weights_(1, s) = std::norm(jones_inner(basis_.e2, exp.photon(s).polarization()));
  }

  time_proposals_.resize(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    TimeProposal& tp = time_proposals_[static_cast<std::size_t>(s)];
    const TemporalAmplitude& chi = exp.photon(s);
    if (chi.source().is_gaussian()) {
      tp.gaussian = true;
      tp.center = chi.window().center;
      tp.sigma = chi.window().sigma;
    } else {
      // histogram proposal over one period of the discrete transform
      tp.gaussian = false;
      const double period = 2.0 * std::numbers::pi / chi.source().sampled().omega_step;
      const int cells = 4096;
      tp.t_start = chi.window().center - 0.5 * period;
      tp.dt = period / cells;
      tp.cell_density.resize(cells);
      tp.cdf.resize(cells);
      const int sub = 8;  // subsample to bound sup |chi|^2 within each cell
      double mass = 0.0;
      std::vector<double> cell_max(static_cast<std::size_t>(cells), 0.0);
      for (int c = 0; c < cells; ++c) {
        double avg = 0.0;
        for (int k = 0; k < sub; ++k) {
          const double t = tp.t_start + tp.dt * (c + (k + 0.5) / sub);
          const double d = std::norm(chi.eval(t));
          avg += d;
          cell_max[static_cast<std::size_t>(c)] =
              std::max(cell_max[static_cast<std::size_t>(c)], d);
        }
        avg /= sub;
        tp.cell_density[static_cast<std::size_t>(c)] = avg;
        mass += avg * tp.dt;
        tp.cdf[static_cast<std::size_t>(c)] = mass;
      }
      if (!(mass > 0.0)) {
        throw ValidationError("sampled photon has no temporal density in its window");
      }
      double scale = 0.0;
      for (int c = 0; c < cells; ++c) {
        const double pdf = tp.cell_density[static_cast<std::size_t>(c)] / mass;
        if (pdf > 0.0) {
          scale = std::max(scale, cell_max[static_cast<std::size_t>(c)] / pdf);
        }
      }
      tp.envelope_scale = scale * 1.01;  // sup |chi|^2 <= scale * pdf
      for (double& v : tp.cdf) {
        v /= mass;
      }
      for (double& v : tp.cell_density) {
        v /= mass;
      }
    }
  }
}

double CorrelationSampler::proposal_density(int photon, double t) const {
  const TimeProposal& tp = time_proposals_[static_cast<std::size_t>(photon)];
  if (tp.gaussian) {
    const double u = (t - tp.center) / tp.sigma;
    return std::exp(-0.5 * u * u) / (tp.sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  const double pos = (t - tp.t_start) / tp.dt;
  if (pos < 0.0 || pos >= static_cast<double>(tp.cell_density.size())) {
    return 0.0;
  }
  return tp.cell_density[static_cast<std::size_t>(pos)];
}

double CorrelationSampler::draw_time(int photon, std::mt19937_64& rng) const {
  const TimeProposal& tp = time_proposals_[static_cast<std::size_t>(photon)];
  if (tp.gaussian) {
    std::normal_distribution<double> normal(tp.center, tp.sigma);
    return normal(rng);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const auto it = std::lower_bound(tp.cdf.begin(), tp.cdf.end(), u);
  const auto cell = static_cast<std::size_t>(std::distance(tp.cdf.begin(), it));
  return tp.t_start + tp.dt * (static_cast<double>(cell) + unit(rng));
}

SampledEvent CorrelationSampler::sample_event(std::mt19937_64& rng,
                                              RejectionStats* stats) const {
  if (collision_free_mass() <= 1e-12) {
    throw ValidationError(
        "collision-free probability mass is zero; there is nothing to sample");
  }
  const Experiment& exp = config_.experiment;
  const int n = exp.photon_count();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> sigma_weights;
  sigma_weights.reserve(static_cast<std::size_t>(n_factorial_));
  Permutation sigma(static_cast<std::size_t>(n));

  for (std::uint64_t attempt = 0; attempt < config_.max_rejections_per_sample; ++attempt) {
    if (stats != nullptr) {
      ++stats->proposals;
    }
    // 1. output sample proportional to its envelope mass
    const double u_mass = unit(rng) * total_envelope_mass_;
    const auto d_it = std::lower_bound(output_cdf_.begin(), output_cdf_.end(), u_mass);
    const auto d_index = static_cast<std::size_t>(std::distance(output_cdf_.begin(), d_it));
    const PortSample& outputs = output_samples_[std::min(d_index, output_samples_.size() - 1)];

    Eigen::MatrixXd u_abs2(n, n);
    for (int d = 0; d < n; ++d) {
      for (int s = 0; s < n; ++s) {
        u_abs2(d, s) = std::norm(exp.network()(outputs[d], exp.input_sample()[s]));
      }
    }

    // 2. detector-to-photon assignment proportional to prod_d |U(d, sigma(d))|^2
    sigma_weights.clear();
    std::iota(sigma.begin(), sigma.end(), 0);
    double sigma_total = 0.0;
    do {
      double w = 1.0;
      for (int d = 0; d < n; ++d) {
        w *= u_abs2(d, sigma[static_cast<std::size_t>(d)]);
      }
      sigma_total += w;
      sigma_weights.push_back(sigma_total);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    if (!(sigma_total > 0.0)) {
      continue;  // this output sample carries no envelope mass
    }
    const double u_sigma = unit(rng) * sigma_total;
    const auto s_it = std::lower_bound(sigma_weights.begin(), sigma_weights.end(), u_sigma);
    auto s_index =
        static_cast<std::size_t>(std::distance(sigma_weights.begin(), s_it));
    s_index = std::min(s_index, sigma_weights.size() - 1);
    std::iota(sigma.begin(), sigma.end(), 0);
    for (std::size_t k = 0; k < s_index; ++k) {
      std::next_permutation(sigma.begin(), sigma.end());
    }

    // 3. basis polarization and detection time per detector
    SampledEvent proposal;
    proposal.event.output_sample = outputs;
    proposal.event.times.resize(static_cast<std::size_t>(n));
    proposal.event.polarizations.resize(static_cast<std::size_t>(n));
    proposal.polarization_indices.resize(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
      const int photon = sigma[static_cast<std::size_t>(d)];
      const int lambda = (unit(rng) < pol_weights_(0, photon)) ? 0 : 1;
      proposal.polarization_indices[static_cast<std::size_t>(d)] = lambda;
      proposal.event.polarizations[static_cast<std::size_t>(d)] =
          (lambda == 0) ? basis_.e1 : basis_.e2;
      proposal.event.times[static_cast<std::size_t>(d)] = draw_time(photon, rng);
    }

    // 4. accept with probability rate / envelope
    const double g = rate(exp, proposal.event);
    Eigen::MatrixXd envelope_matrix(n, n);
    for (int d = 0; d < n; ++d) {
      const int lambda = proposal.polarization_indices[static_cast<std::size_t>(d)];
      const double t = proposal.event.times[static_cast<std::size_t>(d)];
      for (int s = 0; s < n; ++s) {
        const TimeProposal& tp = time_proposals_[static_cast<std::size_t>(s)];
        envelope_matrix(d, s) =
            u_abs2(d, s) * pol_weights_(lambda, s) * tp.envelope_scale * proposal_density(s, t);
      }
    }
    const double envelope = n_factorial_ * permanent_ryser(envelope_matrix);
    if (envelope <= 0.0) {
      if (g > 0.0) {
        throw EnvelopeViolationError("positive rate under a vanishing envelope");
      }
      continue;
    }
    const double ratio = g / envelope;
    if (ratio > 1.0 + 1e-12) {
      throw EnvelopeViolationError("rate exceeds the Cauchy-Schwarz envelope: ratio = " +
                                   std::to_string(ratio));
    }
    if (unit(rng) < std::min(ratio, 1.0)) {
      if (stats != nullptr) {
        ++stats->acceptances;
      }
      return proposal;
    }
  }
  throw RejectionBudgetError("rejection budget exceeded after " +
                             std::to_string(config_.max_rejections_per_sample) + " proposals");
}

SampleBatch CorrelationSampler::sample_batch(std::uint64_t count) const {
  SampleBatch batch;
  batch.collision_free_mass = collision_free_mass();
  batch.events.resize(count);
  if (count == 0) {
    return batch;
  }
  std::atomic<std::uint64_t> proposals{0};
  std::atomic<std::uint64_t> acceptances{0};
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    RejectionStats local;
    for (std::size_t i = begin; i < end; ++i) {
      std::mt19937_64 rng = event_stream(config_.seed, i);
      batch.events[i] = sample_event(rng, &local);
    }
    proposals += local.proposals;
    acceptances += local.acceptances;
  });
  batch.stats.proposals = proposals.load();
  batch.stats.acceptances = acceptances.load();
  return batch;
}

SampleBatch sample_batch(const SamplerConfig& config, std::uint64_t count,
                         const PolarizationBasis& basis) {
  return CorrelationSampler(config, basis).sample_batch(count);
}

ChiSquareResult empirical_check(const SampleBatch& batch, const PavTable& table) {
  if (batch.events.empty()) {
    throw ValidationError("empirical_check requires a non-empty batch");
  }
  if (!(table.total_mass > 0.0)) {
    throw ValidationError("empirical_check requires a table with positive mass");
  }
  std::map<std::vector<PortIndex>, std::size_t> index;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    index[table.entries[i].first.ports()] = i;
  }
  std::vector<double> observed(table.entries.size(), 0.0);
  for (const auto& ev : batch.events) {
    const auto it = index.find(ev.event.output_sample.ports());
    if (it == index.end()) {
      throw ValidationError("sampled output sample is missing from the table");
    }
    observed[it->second] += 1.0;
  }
  std::vector<double> expected(table.entries.size(), 0.0);
  const double total = static_cast<double>(batch.events.size());
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    expected[i] = total * table.entries[i].second / table.total_mass;
  }
  return pearson_chi_square(observed, expected);
}

}  // namespace mbci
