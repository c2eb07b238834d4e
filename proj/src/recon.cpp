#include "vds/recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vds/density.hpp"
#include "vds/error.hpp"

namespace vds {

namespace {

void check_image_side(int side) {
  if (side < 8 || !is_power_of_two(side)) {
    throw Error(ErrorCode::InvalidSide, "image side must be a power of two >= 8, got " + std::to_string(side));
  }
}

double l2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

Image::Image(int side) : side_(side) {
  check_image_side(side);
  pixels_.assign(static_cast<std::size_t>(side) * side, Complex{});
}

Image::Image(int side, std::vector<Complex> pixels) : side_(side), pixels_(std::move(pixels)) {
  check_image_side(side);
  if (pixels_.size() != static_cast<std::size_t>(side) * side) {
    throw Error(ErrorCode::SideMismatch, "pixel count differs from side^2");
  }
}

double Image::norm() const noexcept { return l2(pixels_); }

SamplingMask::SamplingMask(int side) : side_(side) {
  check_image_side(side);
  flags_.assign(static_cast<std::size_t>(side) * side, 0);
}

bool SamplingMask::set(std::size_t bin) {
  auto& f = flags_.at(bin);
  if (f) return false;
  f = 1;
  ++count_;
  return true;
}

double SamplingMask::acceleration() const noexcept {
  return count_ == 0 ? std::numeric_limits<double>::infinity()
                     : static_cast<double>(flags_.size()) / static_cast<double>(count_);
}

std::vector<Ellipse> shepp_logan_ellipses() {
  return {
      {10, 0.69, 0.92, 0.0, 0.0, 0.0},        {-8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
      {-2, 0.11, 0.31, 0.22, 0.0, -18.0},     {-2, 0.16, 0.41, -0.22, 0.0, 18.0},
      {1, 0.21, 0.25, 0.0, 0.35, 0.0},        {1, 0.046, 0.046, 0.0, 0.1, 0.0},
      {1, 0.046, 0.046, 0.0, -0.1, 0.0},      {1, 0.046, 0.023, -0.08, -0.605, 0.0},
      {1, 0.023, 0.023, 0.0, -0.606, 0.0},    {1, 0.023, 0.046, 0.06, -0.605, 0.0},
  };
}

Image phantom_image(int side, const std::vector<Ellipse>& ellipses) {
  Image img(side);
  constexpr int kLattice = 1024;
  const int sub = std::max(1, kLattice / side);
  const int lattice = side * sub;

  struct Prepared {
    int intensity;
    double cx, cy, cos_a, sin_a, inv_a2, inv_b2;
  };
  std::vector<Prepared> prepared;
  for (const auto& e : ellipses) {
    const double phi = e.angle_deg * std::numbers::pi / 180.0;
    prepared.push_back({e.intensity_tenths, e.center_x, e.center_y, std::cos(phi), std::sin(phi),
                        1.0 / (e.semi_x * e.semi_x), 1.0 / (e.semi_y * e.semi_y)});
  }

  for (int row = 0; row < side; ++row) {
    for (int col = 0; col < side; ++col) {
      long long total = 0;
      for (int p = 0; p < sub; ++p) {
        const double y = 1.0 - (2.0 * (row * sub + p) + 1.0) / lattice;
        for (int q = 0; q < sub; ++q) {
          const double x = -1.0 + (2.0 * (col * sub + q) + 1.0) / lattice;
          int tenths = 0;
          for (const auto& e : prepared) {
            const double dx = x - e.cx;
            const double dy = y - e.cy;
            const double u = dx * e.cos_a + dy * e.sin_a;
            const double v = -dx * e.sin_a + dy * e.cos_a;
            if (u * u * e.inv_a2 + v * v * e.inv_b2 <= 1.0) tenths += e.intensity;
          }
          total += tenths;
        }
      }
      img.at(row, col) = static_cast<double>(total) / (10.0 * sub * sub);
    }
  }
  return img;
}

Image shepp_logan(int side) { return phantom_image(side, shepp_logan_ellipses()); }

SamplingMask mask_from_points(const PointSet& ps, int side) {
  if (ps.dim != 2) throw Error(ErrorCode::DimensionMismatch, "k-space masks need 2-D points");
  SamplingMask mask(side);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const auto p = ps.point(k);
    const auto bx = static_cast<std::size_t>(partition_index(p[0], side));
    const auto by = static_cast<std::size_t>(partition_index(p[1], side));
    mask.set(bx * static_cast<std::size_t>(side) + by);
  }
  return mask;
}

std::vector<Complex> measure(const Image& img, const SamplingMask& mask) {
  if (img.side() != mask.side()) throw Error(ErrorCode::SideMismatch, "image and mask sides differ");
  const auto k = centered_dft(img.pixels(), img.side());
  std::vector<Complex> y;
  y.reserve(mask.sampled_count());
  for (std::size_t bin = 0; bin < k.size(); ++bin) {
    if (mask.test(bin)) y.push_back(k[bin]);
  }
  return y;
}

double wavelet_l1(const Image& img, Wavelet w, int levels) {
  std::vector<Complex> c(img.pixels().begin(), img.pixels().end());
  wavelet_forward(c, img.side(), w, levels);
  double s = 0.0;
  for (const auto& v : c) s += std::abs(v);
  return s;
}

ReconResult reconstruct(const std::vector<Complex>& y, const SamplingMask& mask, const ReconConfig& config) {
  const int side = mask.side();
  if (y.size() != mask.sampled_count()) {
    throw Error(ErrorCode::SideMismatch, "measurement count differs from mask cardinality");
  }
  if (config.iterations < 1) throw Error(ErrorCode::ConfigError, "iterations must be >= 1");
  const int levels = config.levels > 0 ? config.levels : log2_exact(side) - 3;
  if (levels < 1 || levels > max_wavelet_levels(side, config.wavelet)) {
    throw Error(ErrorCode::ConfigError, "wavelet levels " + std::to_string(levels) +
                                            " incompatible with side " + std::to_string(side));
  }
  const std::size_t count = static_cast<std::size_t>(side) * side;

  std::vector<std::size_t> bins;
  bins.reserve(y.size());
  for (std::size_t bin = 0; bin < count; ++bin) {
    if (mask.test(bin)) bins.push_back(bin);
  }

  // Projection onto {u : measured coefficients of u equal y}.
  auto project = [&](std::span<const Complex> u) {
    auto k = centered_dft(u, side);
    for (std::size_t i = 0; i < bins.size(); ++i) k[bins[i]] = y[i];
    return centered_idft(k, side);
  };

  std::vector<Complex> zero_kspace(count, Complex{});
  for (std::size_t i = 0; i < bins.size(); ++i) zero_kspace[bins[i]] = y[i];
  std::vector<Complex> z = centered_idft(zero_kspace, side);

  ReconResult result{Image(side)};
  {
    std::vector<Complex> c = z;
    wavelet_forward(c, side, config.wavelet, levels);
    double peak = 0.0;
    for (const auto& v : c) {
      peak = std::max(peak, std::abs(v));
      result.l1_zero_filled += std::abs(v);
    }
    result.gamma = config.dr_gamma > 0.0 ? config.dr_gamma : 0.1 * peak;
  }
  const double gamma = result.gamma;

  std::vector<Complex> reflected(count);
  for (int it = 1; it <= config.iterations; ++it) {
    const auto p = project(z);
    for (std::size_t i = 0; i < count; ++i) reflected[i] = 2.0 * p[i] - z[i];
    wavelet_forward(reflected, side, config.wavelet, levels);
    for (auto& c : reflected) {
      const double mag = std::abs(c);
      c = mag > gamma ? c * ((mag - gamma) / mag) : Complex{};
    }
    wavelet_inverse(reflected, side, config.wavelet, levels);
    double change = 0.0;
    double base = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const Complex step = reflected[i] - p[i];
      change += std::norm(step);
      base += std::norm(z[i]);
      z[i] += step;
    }
    result.iterations = it;
    result.residual = base > 0.0 ? std::sqrt(change / base) : std::sqrt(change);
    if (result.residual < config.tolerance) break;
  }

  result.image = Image(side, project(z));
  result.l1_final = wavelet_l1(result.image, config.wavelet, levels);
  const auto measured = measure(result.image, mask);
  double diff = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) diff += std::norm(measured[i] - y[i]);
  const double ynorm = l2(y);
  result.data_residual = ynorm > 0.0 ? std::sqrt(diff) / ynorm : std::sqrt(diff);
  return result;
}

double snr_db(const Image& reference, const Image& estimate) {
  if (reference.side() != estimate.side()) throw Error(ErrorCode::SideMismatch, "image sides differ");
  const double ref = reference.norm();
  if (ref == 0.0) throw Error(ErrorCode::ZeroReference, "reference image is zero");
  double err = 0.0;
  const auto a = reference.pixels();
  const auto b = estimate.pixels();
  for (std::size_t i = 0; i < a.size(); ++i) err += std::norm(a[i] - b[i]);
  err = std::sqrt(err);
  if (err == 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, 20.0 * std::log10(ref / err));
}

}  // namespace vds
