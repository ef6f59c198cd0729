// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the full physics stack end to end at pinned tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "mbci/averaged.hpp"
#include "mbci/correlation.hpp"
#include "mbci/network.hpp"
#include "mbci/permanent.hpp"
#include "mbci/photonics.hpp"
#include "mbci/sampling.hpp"
#include "mbci/stats.hpp"

using namespace mbci;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  if (!ok) {
    ++failures;
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Experiment fig2b_experiment() {
  std::vector<SpectralAmplitude> photons{gaussian_photon(0.0, 1.0, 0.0, jones_h()),
                                         gaussian_photon(8.0, 1.0, 0.0, jones_h()),
                                         gaussian_photon(12.7, 1.0, 0.0, jones_h())};
  return Experiment(tritter_fig2a(), full_port_sample(3), std::move(photons), 0.0);
}

// --- criterion 1: tritter permanent zero ---
void criterion_1() {
  const double mag = std::abs(permanent_ryser(tritter_fig2a().matrix()));
  report(1, "tritter permanent zero", mag < 1e-12, "|perm| = " + fmt(mag));
}

// --- criteria 2 and 3 share the Fig. 2b landscape ---
void criteria_2_3() {
  const Experiment exp = fig2b_experiment();
  LandscapeSpec spec;  // 241 x 241 over +-6 dw^-1
  const auto start = std::chrono::steady_clock::now();
  const Grid2D grid = landscape(exp, full_port_sample(3), spec);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const double max = grid.values.maxCoeff();
  const Eigen::Index i0 = 120, j0 = 120;  // tau21 = tau32 = 0
  const double dip_ratio = grid.values(i0, j0) / max;
  report(2, "Fig. 2b dip at equal detection times",
         dip_ratio < 1e-9 && elapsed.count() < 60.0,
         "dip/max = " + fmt(dip_ratio) + ", " + fmt(elapsed.count()) + " s");

  // 3a: peak-spacing fit along tau21 at tau32 = 0 against 2 pi / (8 dw)
  std::vector<double> peaks;
  const double dtau = grid.x(1) - grid.x(0);
  double slice_max = 0.0;
  for (Eigen::Index i = 0; i < grid.x.size(); ++i) {
    slice_max = std::max(slice_max, grid.values(i, j0));
  }
  for (Eigen::Index i = 1; i + 1 < grid.x.size(); ++i) {
    const double y0 = grid.values(i - 1, j0);
    const double y1 = grid.values(i, j0);
    const double y2 = grid.values(i + 1, j0);
    if (y1 > y0 && y1 > y2 && y1 > 0.005 * slice_max) {
      peaks.push_back(grid.x(i) + 0.5 * dtau * (y0 - y2) / (y0 - 2 * y1 + y2));
    }
  }
  double mean_spacing = 0.0;
  if (peaks.size() >= 2) {
    mean_spacing = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
  }
  const double expected = 2.0 * std::numbers::pi / 8.0;
  const double rel_err = std::abs(mean_spacing - expected) / expected;
  report(3, "quantum-beat period along tau21", rel_err < 0.05,
         "peak spacing = " + fmt(mean_spacing) + " vs 2pi/8 = " + fmt(expected) +
             ", rel err = " + fmt(rel_err));

  // 3b: Gaussian damping at the |tau| = 6/dw boundary
  double edge = 0.0;
  for (Eigen::Index i = 0; i < grid.x.size(); ++i) {
    edge = std::max({edge, grid.values(i, 0), grid.values(i, grid.y.size() - 1)});
  }
  for (Eigen::Index j = 0; j < grid.y.size(); ++j) {
    edge = std::max({edge, grid.values(0, j), grid.values(grid.x.size() - 1, j)});
  }
  report(3, "Gaussian damping at |tau| = 6/dw", edge < 0.05 * max,
         "edge/max = " + fmt(edge / max));
}

// --- criterion 4: W-state polarization correlations ---
void criterion_4() {
  std::vector<SpectralAmplitude> photons{gaussian_photon(0.0, 1.0, 0.0, jones_h()),
                                         gaussian_photon(8.0, 1.0, 0.0, jones_h()),
                                         gaussian_photon(12.7, 1.0, 0.0, jones_v())};
  const Experiment exp(fourier_multiport(3), full_port_sample(3), photons, 0.0);
  const Eigen::VectorXd angles = Eigen::VectorXd::LinSpaced(181, 0.0, std::numbers::pi);
  const Grid2D scan =
      polarization_scan(exp, full_port_sample(3), 0.1, jones_h(), angles, angles);

  const double visibility = fringe_visibility(scan);
  double worst = 0.0;
  for (int k = 1; k < 180; ++k) {
    const double ref = scan.values(0, k);
    if (ref <= 0.0) {
      continue;
    }
    for (int i = 1; i <= k; ++i) {
      worst = std::max(worst, std::abs(scan.values(i, k - i) - ref) / ref);
    }
  }
  report(4, "W-state fringes: 100% visibility in alpha+beta",
         std::abs(visibility - 1.0) < 1e-9 && worst < 1e-9,
         "visibility = " + fmt(visibility) + ", anti-diagonal spread = " + fmt(worst));
}

// --- criterion 5: HOM suite with the quadrature oracle ---
void criterion_5() {
  const InterferometerUnitary bs = beamsplitter();
  const PortSample both = full_port_sample(2);
  bool ok = true;
  std::string detail;

  // identical photons
  {
    std::vector<SpectralAmplitude> twins{gaussian_photon(0.0, 1.0, 0.0, jones_h()),
                                         gaussian_photon(0.0, 1.0, 0.0, jones_h())};
    const Experiment exp(bs, both, twins, 0.0);
    const GramMatrix g = gram_matrix(exp.photons());
    const double p = averaged_probability(bs, both, both, g).value;
    const double oracle = pav_quadrature_oracle(exp, both);
    ok = ok && std::abs(p) < 1e-9 && std::abs(oracle - p) < 1e-6;
    detail = "identical: " + fmt(p);
  }

  // orthogonally polarized (fully distinguishable)
  {
    std::vector<SpectralAmplitude> photons{gaussian_photon(0.0, 1.0, 0.0, jones_h()),
                                           gaussian_photon(0.0, 1.0, 0.0, jones_v())};
    const Experiment exp(bs, both, photons, 0.0);
    const GramMatrix g = gram_matrix(exp.photons());
    const double p = averaged_probability(bs, both, both, g).value;
    const double oracle = pav_quadrature_oracle(exp, both);
    ok = ok && std::abs(p - 0.5) < 1e-9 && std::abs(oracle - p) < 1e-6;
    detail += ", orthogonal: " + fmt(p);
  }

  // partial overlap via emission-time delay: |g|^2 = exp(-tau^2) at dw = 1
  double worst_analytic = 0.0;
  double worst_oracle = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double delay = 0.25 * k;
    std::vector<SpectralAmplitude> photons{gaussian_photon(0.0, 1.0, 0.0, jones_h()),
                                           gaussian_photon(0.0, 1.0, delay, jones_h())};
    const Experiment exp(bs, both, photons, 0.0);
    const GramMatrix g = gram_matrix(exp.photons());
    const double p = averaged_probability(bs, both, both, g).value;
    const double expected = (1.0 - std::exp(-delay * delay)) / 2.0;
    worst_analytic = std::max(worst_analytic, std::abs(p - expected));
    worst_oracle = std::max(worst_oracle, std::abs(pav_quadrature_oracle(exp, both) - p));
  }
  ok = ok && worst_analytic < 1e-9 && worst_oracle < 1e-6;
  report(5, "HOM suite: P = 0, 1/2, (1-|g|^2)/2 with oracle", ok,
         detail + ", max |P - (1-x)/2| = " + fmt(worst_analytic) +
             ", max oracle diff = " + fmt(worst_oracle));
}

// --- criterion 6: limit identities on Haar unitaries ---
void criterion_6() {
  std::mt19937 rng(2025);
  std::uniform_int_distribution<int> n_dist(2, 4);
  double worst_ideal = 0.0;
  double worst_classical = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = n_dist(rng);
    const int m = (trial % 2 == 0) ? 4 : 6;
    const InterferometerUnitary u = haar_random(m, 5000 + static_cast<std::uint64_t>(trial));
    std::vector<PortIndex> pool(static_cast<std::size_t>(m));
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    const PortSample d =
        make_port_sample(std::vector<PortIndex>(pool.begin(), pool.begin() + n), m);
    std::shuffle(pool.begin(), pool.end(), rng);
    const PortSample s =
        make_port_sample(std::vector<PortIndex>(pool.begin(), pool.begin() + n), m);

    const GramMatrix ones(Eigen::MatrixXcd::Ones(n, n));
    const GramMatrix identity(Eigen::MatrixXcd::Identity(n, n));
    worst_ideal = std::max(worst_ideal,
                           std::abs(averaged_probability(u, d, s, ones).value -
                                    averaged_probability_ideal(u, d, s)));
    worst_classical = std::max(worst_classical,
                               std::abs(averaged_probability(u, d, s, identity).value -
                                        averaged_probability_distinguishable(u, d, s)));
  }
  report(6, "limit identities (all-ones and identity Gram)",
         worst_ideal < 1e-10 && worst_classical < 1e-12,
         "max ideal diff = " + fmt(worst_ideal) +
             ", max distinguishable diff = " + fmt(worst_classical));
}

// --- criterion 7: permanent kernel ---
void criterion_7() {
  std::mt19937 rng(4096);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> size(1, 7);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m(i, j) = Complex(gauss(rng), gauss(rng));
      }
    }
    const Complex naive = permanent_naive(m);
    const Complex ryser = permanent_ryser(m);
    worst = std::max(worst, std::abs(ryser - naive) / std::max(1.0, std::abs(naive)));
  }

  Eigen::MatrixXcd big(20, 20);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      big(i, j) = Complex(gauss(rng), gauss(rng));
    }
  }
  const auto start = std::chrono::steady_clock::now();
  (void)permanent_ryser(big);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const double sym = std::norm(permanent_ryser(fourier_multiport(3).matrix()));
  const double cls = permanent_ryser(fourier_multiport(3).matrix().cwiseAbs2().eval());

  report(7, "permanent kernel vs naive oracle",
         worst < 1e-10 && elapsed.count() < 5.0 && std::abs(sym - 1.0 / 3.0) < 1e-12 &&
             std::abs(cls - 2.0 / 9.0) < 1e-12,
         "max rel err = " + fmt(worst) + ", n=20 in " + fmt(elapsed.count()) +
             " s, |perm|^2 = " + fmt(sym) + ", perm|U|^2 = " + fmt(cls));
}

// --- criterion 8: sampler exactness ---
void criterion_8() {
  const auto start = std::chrono::steady_clock::now();

  std::vector<SpectralAmplitude> photons{gaussian_photon(0.0, 1.0, 0.0, jones_h()),
                                         gaussian_photon(1.2, 1.0, 0.3, linear_polarization(0.6)),
                                         gaussian_photon(0.4, 1.0, -0.2, jones_v())};
  SamplerConfig cfg{
      Experiment(haar_random(6, 424242), make_port_sample({0, 1, 2}, 6), photons, 0.0), 31337};
  const CorrelationSampler sampler(cfg);
  const SampleBatch batch = sampler.sample_batch(100000);
  const ChiSquareResult chi = empirical_check(batch, sampler.table());

  PavTable wrong = sampler.table();
  auto heaviest = std::max_element(
      wrong.entries.begin(), wrong.entries.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  auto lightest = std::min_element(
      wrong.entries.begin(), wrong.entries.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  const double moved = 0.2 * heaviest->second;
  heaviest->second -= moved;
  lightest->second += moved;
  const ChiSquareResult control = empirical_check(batch, wrong);

  // single-photon time marginal
  const InterferometerUnitary trivial(Eigen::MatrixXcd::Identity(1, 1));
  std::vector<SpectralAmplitude> one{gaussian_photon(2.0, 1.0, 0.3, jones_h())};
  SamplerConfig single{Experiment(trivial, full_port_sample(1), one, 0.0), 777};
  const SampleBatch singles = CorrelationSampler(single).sample_batch(10000);
  std::vector<double> times;
  times.reserve(singles.events.size());
  for (const auto& ev : singles.events) {
    times.push_back(ev.event.times[0]);
  }
  const double ks =
      ks_statistic(std::move(times), [](double t) { return normal_cdf((t - 0.3) / 0.5); });

  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  report(8, "sampler exactness (chi2, KS, negative control)",
         chi.p_value > 0.001 && ks < 0.02 && control.p_value < 1e-6 &&
             elapsed.count() < 120.0,
         "p = " + fmt(chi.p_value) + ", KS = " + fmt(ks) +
             ", control p = " + fmt(control.p_value) + ", " + fmt(elapsed.count()) + " s");
}

// --- criterion 9: equal-time factorization ---
void criterion_9() {
  std::mt19937 rng(909);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> freq(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.6, 1.6);
  std::uniform_real_distribution<double> t_dist(-1.0, 1.0);
  std::uniform_int_distribution<int> n_dist(1, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = n_dist(rng);
    std::uniform_int_distribution<int> m_dist(n, 6);
    const int m = m_dist(rng);
    std::vector<SpectralAmplitude> photons;
    for (int i = 0; i < n; ++i) {
      photons.push_back(gaussian_photon(
          freq(rng), width(rng), t_dist(rng),
          JonesVector(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)))));
    }
    std::vector<PortIndex> pool(static_cast<std::size_t>(m));
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    const PortSample s =
        make_port_sample(std::vector<PortIndex>(pool.begin(), pool.begin() + n), m);
    std::shuffle(pool.begin(), pool.end(), rng);
    const PortSample d =
        make_port_sample(std::vector<PortIndex>(pool.begin(), pool.begin() + n), m);
    const Experiment exp(haar_random(m, 9000 + static_cast<std::uint64_t>(trial)), s,
                         photons, 0.0);

    const double t = t_dist(rng);
    const JonesVector p(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)));
    DetectionEvent ev{d, std::vector<double>(static_cast<std::size_t>(n), t),
                      std::vector<JonesVector>(static_cast<std::size_t>(n), p)};
    const double direct = rate(exp, ev);
    const double factored = equal_time_rate(exp, d, t, p);
    worst = std::max(worst,
                     std::abs(direct - factored) / std::max({direct, factored, 1e-300}));
  }
  report(9, "equal-time factorization identity", worst < 1e-12,
         "max rel diff = " + fmt(worst));
}

}  // namespace

int main() {
  criterion_1();
  criteria_2_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (failures > 0) {
    std::printf("%d criterion check(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
