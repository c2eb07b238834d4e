#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "vds/density.hpp"
#include "vds/error.hpp"
#include "vds/recon.hpp"
#include "vds/sampler.hpp"
#include "vds/trajectory.hpp"
#include "vds/transforms.hpp"
#include "vds/tsp.hpp"

using vds::Complex;

namespace {

std::vector<Complex> random_complex(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> v(count);
  for (auto& c : v) c = Complex(g(gen), g(gen));
  return v;
}

double l2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double rel_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

vds::SamplingMask full_mask(int side) {
  vds::SamplingMask m(side);
  for (std::size_t b = 0; b < static_cast<std::size_t>(side) * side; ++b) m.set(b);
  return m;
}

}  // namespace

TEST_CASE("centered DFT matches direct summation") {
  const int n = 8;
  const auto img = random_complex(64, 3);
  const auto fast = vds::centered_dft(img, n);
  const auto slow = oracle::naive_centered_dft(img, n);
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) <= 1e-12);
}

TEST_CASE("DFT and wavelets are unitary and invertible") {
  for (int n : {8, 32, 128}) {
    const auto x = random_complex(static_cast<std::size_t>(n) * n, n);
    const double norm = l2(x);
    const auto k = vds::centered_dft(x, n);
    CHECK(std::abs(l2(k) - norm) <= 1e-9 * norm);
    const auto back = vds::centered_idft(k, n);
    CHECK(rel_diff(back, x) <= 1e-10);

    for (auto w : {vds::Wavelet::haar, vds::Wavelet::daubechies4}) {
      for (int levels : {1, vds::max_wavelet_levels(n, w)}) {
        auto c = x;
        vds::wavelet_forward(c, n, w, levels);
        CHECK(std::abs(l2(c) - norm) <= 1e-9 * norm);
        vds::wavelet_inverse(c, n, w, levels);
        CHECK(rel_diff(c, x) <= 1e-10);
      }
    }
  }
}

TEST_CASE("wavelet configuration errors") {
  std::vector<Complex> x(64);
  CHECK_THROWS_AS(vds::wavelet_forward(x, 8, vds::Wavelet::haar, 4), vds::Error);
  CHECK_THROWS_AS(vds::wavelet_forward(x, 8, vds::Wavelet::daubechies4, 3), vds::Error);
  CHECK(vds::max_wavelet_levels(128, vds::Wavelet::haar) == 7);
  CHECK(vds::parse_wavelet("db4") == vds::Wavelet::daubechies4);
  CHECK_THROWS_AS(vds::parse_wavelet("coif"), vds::Error);
}

TEST_CASE("images must have a power-of-two side of at least 8") {
  CHECK_THROWS_AS(vds::Image(4), vds::Error);
  CHECK_THROWS_AS(vds::Image(24), vds::Error);
  CHECK_THROWS_AS(vds::shepp_logan(12), vds::Error);
  CHECK_NOTHROW(vds::Image(8));
}

TEST_CASE("phantom intensities lie in [0, 1] with peak 1") {
  const auto img = vds::shepp_logan(128);
  double peak = 0.0;
  for (const auto& p : img.pixels()) {
    CHECK(p.imag() == 0.0);
    CHECK((p.real() >= 0.0 && p.real() <= 1.0));
    peak = std::max(peak, p.real());
  }
  CHECK(peak == 1.0);
}

TEST_CASE("phantom symmetry") {
  // Only ellipses centred on the vertical axis with axis-aligned orientation are
  // mirror symmetric; the full table is not (its tilted and off-axis ellipses differ).
  std::vector<vds::Ellipse> symmetric;
  for (const auto& e : vds::shepp_logan_ellipses()) {
    if (e.center_x == 0.0 && std::fmod(e.angle_deg, 180.0) == 0.0) symmetric.push_back(e);
  }
  REQUIRE(symmetric.size() >= 4);
  const auto sym = vds::phantom_image(64, symmetric);
  const auto full = vds::shepp_logan(64);
  double sym_err = 0.0, full_err = 0.0;
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) {
      sym_err = std::max(sym_err, std::abs(sym.at(r, c) - sym.at(r, 63 - c)));
      full_err = std::max(full_err, std::abs(full.at(r, c) - full.at(r, 63 - c)));
    }
  }
  CHECK(sym_err <= 1e-9);
  CHECK(full_err > 0.01);
}

TEST_CASE("phantom at 64 agrees with 2x2 averages at 128") {
  const auto a = vds::shepp_logan(64);
  const auto b = vds::shepp_logan(128);
  double worst = 0.0;
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) {
      const Complex avg = 0.25 * (b.at(2 * r, 2 * c) + b.at(2 * r + 1, 2 * c) + b.at(2 * r, 2 * c + 1) +
                                  b.at(2 * r + 1, 2 * c + 1));
      worst = std::max(worst, std::abs(avg - a.at(r, c)));
    }
  }
  CHECK(worst <= 0.1);
}

TEST_CASE("mask construction from points") {
  vds::PointSet empty;
  CHECK(vds::mask_from_points(empty, 16).sampled_count() == 0);

  vds::PointSet centre;
  const double p[2] = {0.5, 0.5};
  centre.push_back(p);
  centre.push_back(p);
  const auto m = vds::mask_from_points(centre, 16);
  CHECK(m.sampled_count() == 1);
  CHECK(m.test(8 * 16 + 8));

  vds::PointSet corner;
  const double q[2] = {1.0, 1.0};
  corner.push_back(q);
  CHECK(vds::mask_from_points(corner, 16).test(16 * 16 - 1));

  vds::PointSet three;
  three.dim = 3;
  const double r[3] = {0.1, 0.2, 0.3};
  three.push_back(r);
  CHECK_THROWS_AS(vds::mask_from_points(three, 16), vds::Error);

  CHECK(full_mask(8).acceleration() == 1.0);
}

TEST_CASE("a path resampled at one bin width gives an 8-connected mask walk") {
  const int n = 64;
  const auto g = vds::tsp_adjusted_density(vds::radial_polynomial_density(2, n, 2.0, 0.1));
  const auto ps = vds::draw_points(g, 400, 5);
  const auto traj = vds::parameterize(ps, vds::solve_heuristic(ps));
  const auto samples = vds::resample(traj, 1.0 / n);
  auto bin = [n](double v) { return std::min(static_cast<int>(std::floor(v * n)), n - 1); };
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const auto a = samples.point(k - 1);
    const auto b = samples.point(k);
    CHECK(std::abs(bin(a[0]) - bin(b[0])) <= 1);
    CHECK(std::abs(bin(a[1]) - bin(b[1])) <= 1);
  }
}

TEST_CASE("measurements use the unitary DFT") {
  const auto img = vds::shepp_logan(32);
  const auto y = vds::measure(img, full_mask(32));
  CHECK(l2(y) == doctest::Approx(img.norm()).epsilon(1e-12));

  vds::Image constant(16);
  for (auto& px : constant.pixels()) px = 0.7;
  vds::SamplingMask dc(16);
  dc.set(8 * 16 + 8);
  const auto ydc = vds::measure(constant, dc);
  REQUIRE(ydc.size() == 1);
  // Direct sum of 256 pixels of 0.7, divided by n = 16.
  CHECK(std::abs(ydc[0] - Complex(0.7 * 256 / 16, 0.0)) <= 1e-12);

  const auto zero = vds::measure(vds::Image(16), full_mask(16));
  CHECK(l2(zero) == 0.0);

  CHECK_THROWS_AS(vds::measure(vds::Image(16), vds::SamplingMask(32)), vds::Error);
}

TEST_CASE("full sampling reconstructs the image") {
  const auto img = vds::shepp_logan(64);
  const auto mask = full_mask(64);
  const auto res = vds::reconstruct(vds::measure(img, mask), mask);
  CHECK(rel_diff(res.image.pixels(), img.pixels()) <= 1e-6);
  CHECK(res.data_residual <= 1e-9);
  CHECK(vds::snr_db(img, res.image) >= 120.0);
}

TEST_CASE("a 1-sparse wavelet image is recovered from half the coefficients") {
  const int n = 32;
  const int levels = 2;
  std::vector<Complex> coeffs(static_cast<std::size_t>(n) * n, 0.0);
  coeffs[5 * n + 3] = 1.0;  // a coarse-scale coefficient
  vds::wavelet_inverse(coeffs, n, vds::Wavelet::haar, levels);
  const vds::Image img(n, coeffs);

  vds::SamplingMask mask(n);
  std::mt19937_64 gen(7);
  while (mask.sampled_count() < static_cast<std::size_t>(n * n / 2)) mask.set(gen() % (n * n));

  vds::ReconConfig cfg;
  cfg.levels = levels;
  cfg.iterations = 3000;
  cfg.tolerance = 1e-12;
  const auto res = vds::reconstruct(vds::measure(img, mask), mask, cfg);
  CHECK(rel_diff(res.image.pixels(), img.pixels()) <= 1e-4);
  CHECK(res.data_residual <= 1e-9);
}

TEST_CASE("reconstruction is feasible and lowers the wavelet l1 norm") {
  const int n = 64;
  const auto img = vds::shepp_logan(n);
  const auto g = vds::radial_polynomial_density(2, n, 2.0, 0.1);
  const auto ps = vds::draw_points(g, 900, 2);
  const auto mask = vds::mask_from_points(ps, n);
  const auto res = vds::reconstruct(vds::measure(img, mask), mask);
  CHECK(res.data_residual <= 1e-9);
  CHECK(res.l1_final <= res.l1_zero_filled);
  CHECK(res.iterations >= 1);
  CHECK(res.gamma > 0.0);

  vds::ReconConfig bad;
  bad.levels = 10;
  CHECK_THROWS_AS(vds::reconstruct(vds::measure(img, mask), mask, bad), vds::Error);
}

TEST_CASE("snr in decibels") {
  const auto ref = vds::shepp_logan(32);
  CHECK(vds::snr_db(ref, ref) == vds::kSnrCapDb);
  CHECK(vds::snr_db(ref, vds::Image(32)) == doctest::Approx(0.0).epsilon(1e-12));

  // A perturbation with a hundredth of the reference norm gives 40 dB.
  auto noise = random_complex(32 * 32, 1);
  const double scale = ref.norm() / 100.0 / l2(noise);
  vds::Image est = ref;
  for (std::size_t i = 0; i < noise.size(); ++i) est.pixels()[i] += noise[i] * scale;
  CHECK(std::abs(vds::snr_db(ref, est) - 40.0) <= 1e-9);

  CHECK_THROWS_AS(vds::snr_db(vds::Image(32), ref), vds::Error);
}
