#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mbci/photonics.hpp"
#include "mbci/quadrature.hpp"

using namespace mbci;

namespace {

// trapezoid oracle on a fixed fine grid, independent of the adaptive
// quadrature used inside the library
template <typename F>
auto trapezoid_oracle(F f, double a, double b, int intervals) {
  auto sum = 0.5 * (f(a) + f(b));
  const double h = (b - a) / intervals;
  for (int i = 1; i < intervals; ++i) {
    sum += f(a + h * i);
  }
  return sum * h;
}

}  // namespace

TEST_SUITE("photonics") {

TEST_CASE("gaussian spectrum is normalized (trapezoid oracle)") {
  const SpectralAmplitude xi = gaussian_photon(100.0, 1.0, 0.0, jones_h());
  const double norm = trapezoid_oracle(
      [&](double w) { return std::norm(xi.eval(w)); }, 100.0 - 12.0, 100.0 + 12.0, 20000);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(gaussian_photon(0.0, 0.0, 0.0, jones_h()), NonPositiveBandwidthError);
  CHECK_THROWS_AS(gaussian_photon(0.0, -1.0, 0.0, jones_h()), NonPositiveBandwidthError);
}

TEST_CASE("temporal envelope peaks at t0 + delay and obeys Parseval") {
  const double t0 = 0.7;
  const double delay = 1.4;
  const TemporalAmplitude chi = to_temporal(gaussian_photon(3.0, 1.0, t0, jones_h()), delay);
  CHECK(chi.window().center == doctest::Approx(t0 + delay));
  CHECK(chi.window().sigma == doctest::Approx(0.5));

  // the peak really is at the window center
  const double peak = std::norm(chi.eval(t0 + delay));
  for (double dt : {-0.3, -0.1, 0.1, 0.3}) {
    CHECK(std::norm(chi.eval(t0 + delay + dt)) < peak);
  }

  const double parseval = trapezoid_oracle(
      [&](double t) { return std::norm(chi.eval(t)); }, t0 + delay - 10, t0 + delay + 10,
      20000);
  CHECK(parseval == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("closed-form peak equals the numerical Fourier transform") {
  const double w0 = 40.0;
  const double bw = 1.3;
  const SpectralAmplitude xi = gaussian_photon(w0, bw, 0.0, jones_h());
  const TemporalAmplitude chi = to_temporal(xi, 0.0);

  // numerical F[xi](0) = (2 pi)^(-1/2) int dw xi(w)
  const Complex numeric =
      trapezoid_oracle([&](double w) { return xi.eval(w); }, w0 - 16 * bw, w0 + 16 * bw,
                       400000) /
      std::sqrt(2.0 * std::numbers::pi);
  const Complex closed = chi.eval(0.0);
  CHECK(std::abs(closed - numeric) <= 1e-8 * std::abs(numeric));

  // peak magnitude (2 bw^2 / pi)^(1/4)
  const double expected_peak = std::pow(2.0 * bw * bw / std::numbers::pi, 0.25);
  CHECK(std::abs(chi.eval(0.0)) == doctest::Approx(expected_peak).epsilon(1e-12));
}

TEST_CASE("phase near the peak rotates at -omega0") {
  const double w0 = 5.0;
  const TemporalAmplitude chi = to_temporal(gaussian_photon(w0, 1.0, 0.0, jones_h()), 0.0);
  const double h = 1e-6;
  const double t = 0.05;
  const double rate = std::arg(chi.eval(t + h) / chi.eval(t)) / h;
  CHECK(std::abs(rate - (-w0)) <= 1e-6 * w0);
}

TEST_CASE("temporal amplitude decays far from the pulse") {
  const TemporalAmplitude chi = to_temporal(gaussian_photon(0.0, 1.0, 0.0, jones_h()), 0.0);
  CHECK(std::abs(chi.eval(40.0)) < 1e-300);
  CHECK(std::abs(chi.eval(-40.0)) < 1e-300);
}

TEST_CASE("overlap anchors") {
  const TemporalAmplitude a = to_temporal(gaussian_photon(2.0, 1.0, 0.1, jones_h()), 0.0);
  CHECK(std::abs(overlap(a, a) - Complex(1, 0)) < 1e-12);

  const TemporalAmplitude v = to_temporal(gaussian_photon(2.0, 1.0, 0.1, jones_v()), 0.0);
  CHECK(std::abs(overlap(a, v)) == 0.0);
}

TEST_CASE("frequency-offset overlap: closed form vs quadrature oracle") {
  // same bandwidth, same emission time, offset 8 dw: |g| = exp(-8)
  const TemporalAmplitude a = to_temporal(gaussian_photon(0.0, 1.0, 0.0, jones_h()), 0.0);
  const TemporalAmplitude b = to_temporal(gaussian_photon(8.0, 1.0, 0.0, jones_h()), 0.0);
  const Complex closed = overlap(a, b);
  CHECK(std::abs(closed) == doctest::Approx(std::exp(-8.0)).epsilon(1e-10));

  const Complex quad = trapezoid_oracle(
      [&](double t) { return std::conj(a.eval(t)) * b.eval(t); }, -14.0, 14.0, 200000);
  CHECK(std::abs(closed - quad) < 1e-8);
}

TEST_CASE("closed-form overlap vs quadrature on 100 random pairs") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> freq(-3.0, 3.0);
  std::uniform_real_distribution<double> width(1.0 / std::sqrt(3.0), std::sqrt(3.0));
  std::uniform_real_distribution<double> time(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double bw_a = width(rng);
    const double bw_b = width(rng);  // ratio within [1/3, 3]
    const TemporalAmplitude a =
        to_temporal(gaussian_photon(freq(rng), bw_a, time(rng), jones_h()), 0.0);
    const TemporalAmplitude b =
        to_temporal(gaussian_photon(freq(rng), bw_b, time(rng), jones_h()), 0.0);
    const Complex closed = overlap(a, b);
    const Complex quad = trapezoid_oracle(
        [&](double t) { return std::conj(a.eval(t)) * b.eval(t); }, -25.0, 25.0, 400000);
    CHECK(std::abs(closed - quad) < 1e-8);
  }
}

TEST_CASE("overlap symmetry and time-shift covariance") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double w1 = u(rng), w2 = u(rng), t1 = u(rng), t2 = u(rng);
    const TemporalAmplitude a = to_temporal(gaussian_photon(w1, 1.0, t1, jones_h()), 0.0);
    const TemporalAmplitude b =
        to_temporal(gaussian_photon(w2, 1.4, t2, linear_polarization(0.4)), 0.0);
    CHECK(std::abs(overlap(a, b) - std::conj(overlap(b, a))) < 1e-12);

    const double shift = u(rng);
    const TemporalAmplitude as =
        to_temporal(gaussian_photon(w1, 1.0, t1 + shift, jones_h()), 0.0);
    const TemporalAmplitude bs =
        to_temporal(gaussian_photon(w2, 1.4, t2 + shift, linear_polarization(0.4)), 0.0);
    CHECK(std::abs(std::abs(overlap(as, bs)) - std::abs(overlap(a, b))) < 1e-12);
  }
}

TEST_CASE("gram matrix limits and the Fig. 2 photon triple") {
  const JonesVector h = jones_h();
  std::vector<TemporalAmplitude> identical(3, to_temporal(gaussian_photon(1.0, 1.0, 0.0, h), 0.0));
  const GramMatrix ones = gram_matrix(identical);
  CHECK((ones.matrix() - Eigen::MatrixXcd::Ones(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  std::vector<TemporalAmplitude> orthogonal{
      to_temporal(gaussian_photon(1.0, 1.0, 0.0, jones_h()), 0.0),
      to_temporal(gaussian_photon(1.0, 1.0, 0.0, jones_v()), 0.0)};
  const GramMatrix id = gram_matrix(orthogonal);
  CHECK((id.matrix() - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  std::vector<TemporalAmplitude> fig2{to_temporal(gaussian_photon(0.0, 1.0, 0.0, h), 0.0),
                                      to_temporal(gaussian_photon(8.0, 1.0, 0.0, h), 0.0),
                                      to_temporal(gaussian_photon(12.7, 1.0, 0.0, h), 0.0)};
  const GramMatrix g = gram_matrix(fig2);
  CHECK(std::abs(g(0, 1)) == doctest::Approx(std::exp(-8.0)).epsilon(1e-10));
  CHECK(std::abs(g(0, 2)) == doctest::Approx(std::exp(-12.7 * 12.7 / 8.0)).epsilon(1e-8));
  CHECK(std::abs(g(1, 2)) == doctest::Approx(std::exp(-4.7 * 4.7 / 8.0)).epsilon(1e-10));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g.matrix(), Eigen::EigenvaluesOnly);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("gram matrix constructor validates") {
  Eigen::MatrixXcd bad_diag = Eigen::MatrixXcd::Identity(2, 2);
  bad_diag(0, 0) = Complex(0.5, 0);
  CHECK_THROWS_AS((void)GramMatrix(bad_diag), NormalizationError);

  Eigen::MatrixXcd not_hermitian = Eigen::MatrixXcd::Identity(2, 2);
  not_hermitian(0, 1) = Complex(0.3, 0);
  not_hermitian(1, 0) = Complex(0.1, 0);
  CHECK_THROWS_AS((void)GramMatrix(not_hermitian), ValidationError);

  // |g01| = 1 by polarization but distinct frequencies: not PSD would need
  // an inconsistent matrix; construct one directly
  Eigen::MatrixXcd not_psd(3, 3);
  not_psd << 1, 1, 0, 1, 1, 1, 0, 1, 1;
  CHECK_THROWS_AS((void)GramMatrix(not_psd), ValidationError);
}

TEST_CASE("detection density") {
  const TemporalAmplitude chi = to_temporal(gaussian_photon(2.0, 1.0, 0.0, jones_h()), 0.0);
  CHECK(detection_density(chi, jones_v(), 0.0) == 0.0);
  CHECK(detection_density(chi, jones_v(), 1.0) == 0.0);

  const double total = trapezoid_oracle(
      [&](double t) { return detection_density(chi, jones_h(), t); }, -10.0, 10.0, 20000);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  // at one temporal sigma from the peak the density is peak * exp(-1/2)
  const double peak = detection_density(chi, jones_h(), 0.0);
  CHECK(peak == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
  const double sigma = 0.5;
  CHECK(detection_density(chi, jones_h(), sigma) ==
        doctest::Approx(peak * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("sampled spectrum matches the Gaussian closed form") {
  const double w0 = 6.0;
  const double bw = 1.0;
  const double t0 = 0.4;
  const int n = 1024;
  const double w_lo = w0 - 10.0;
  const double step = 20.0 / (n - 1);
  Eigen::VectorXcd values(n);
  const SpectralAmplitude exact = gaussian_photon(w0, bw, t0, jones_h());
  for (int j = 0; j < n; ++j) {
    values(j) = exact.eval(w_lo + step * j);
  }
  const SpectralAmplitude sampled = sampled_photon(w_lo, step, values, jones_h());
  const TemporalAmplitude chi_sampled = to_temporal(sampled, 0.0);
  const TemporalAmplitude chi_exact = to_temporal(exact, 0.0);

  for (double t : {-1.0, -0.3, 0.0, 0.4, 0.9, 1.7}) {
    CHECK(std::abs(chi_sampled.eval(t) - chi_exact.eval(t)) < 1e-6);
  }
  CHECK(chi_sampled.window().center == doctest::Approx(t0).epsilon(0.02));
  CHECK(chi_sampled.window().sigma == doctest::Approx(0.5).epsilon(0.02));

  // mixed sampled x gaussian overlap falls back to quadrature
  const TemporalAmplitude other = to_temporal(gaussian_photon(w0 + 1.0, bw, 0.0, jones_h()), 0.0);
  const Complex mixed = overlap(chi_sampled, other);
  const Complex closed = overlap(chi_exact, other);
  CHECK(std::abs(mixed - closed) < 1e-6);
}

TEST_CASE("sampled spectrum validation") {
  Eigen::VectorXcd short_grid(4);
  short_grid.setOnes();
  CHECK_THROWS_AS(sampled_photon(0.0, 0.1, short_grid, jones_h()), ValidationError);

  Eigen::VectorXcd zeros(16);
  zeros.setZero();
  CHECK_THROWS_AS(sampled_photon(0.0, 0.1, zeros, jones_h()), NormalizationError);
}

}  // TEST_SUITE
