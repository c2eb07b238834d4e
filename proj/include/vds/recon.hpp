#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vds/sampler.hpp"
#include "vds/transforms.hpp"

namespace vds {

/// Square complex image, side a power of two and at least 8. Row-major, row 0 on top.
class Image {
 public:
  explicit Image(int side);
  Image(int side, std::vector<Complex> pixels);

  int side() const noexcept { return side_; }
  std::span<const Complex> pixels() const noexcept { return pixels_; }
  std::span<Complex> pixels() noexcept { return pixels_; }
  Complex& at(int row, int col) { return pixels_[static_cast<std::size_t>(row) * side_ + col]; }
  Complex at(int row, int col) const { return pixels_[static_cast<std::size_t>(row) * side_ + col]; }
  double norm() const noexcept;

 private:
  int side_;
  std::vector<Complex> pixels_;
};

/// Set of sampled bins on the centered Fourier grid; bin (kx, ky) has flat index
/// kx * side + ky and bin (side/2, side/2) is the zero frequency.
class SamplingMask {
 public:
  explicit SamplingMask(int side);

  int side() const noexcept { return side_; }
  bool test(std::size_t bin) const { return flags_.at(bin) != 0; }
  /// Returns true when the bin was not set before.
  bool set(std::size_t bin);
  std::size_t sampled_count() const noexcept { return count_; }
  double acceleration() const noexcept;
  std::span<const std::uint8_t> flags() const noexcept { return flags_; }

 private:
  int side_;
  std::vector<std::uint8_t> flags_;
  std::size_t count_ = 0;
};

/// One ellipse of an analytic phantom. Intensity is in tenths so sums stay exact.
struct Ellipse {
  int intensity_tenths;
  double semi_x;
  double semi_y;
  double center_x;
  double center_y;
  double angle_deg;
};

/// Modified (high-contrast) Shepp-Logan table: ten ellipses, peak intensity 1.
std::vector<Ellipse> shepp_logan_ellipses();

/// Rasterizes ellipses on [-1,1]^2. Each pixel is the mean over a fixed 1024 x 1024
/// sub-sample lattice (or its own centre when side > 1024), so halving the side is
/// exactly a 2 x 2 average.
Image phantom_image(int side, const std::vector<Ellipse>& ellipses);
Image shepp_logan(int side);

/// Bin (floor(x*side), floor(y*side)) per point, clamped; duplicates collapse.
SamplingMask mask_from_points(const PointSet& ps, int side);

/// Centered unitary DFT coefficients at set bins, in increasing bin order.
std::vector<Complex> measure(const Image& img, const SamplingMask& mask);

struct ReconConfig {
  Wavelet wavelet = Wavelet::haar;
  /// <= 0 selects log2(side) - 3.
  int levels = 0;
  int iterations = 300;
  /// <= 0 selects 0.1 * max |wavelet coefficient| of the zero-filled image.
  double dr_gamma = 0.0;
  double tolerance = 1e-6;
};

struct ReconResult {
  Image image;
  int iterations = 0;
  /// Relative change of the Douglas-Rachford variable at the last step.
  double residual = 0.0;
  /// ||measure(image) - y|| / ||y|| (absolute when y is zero).
  double data_residual = 0.0;
  double gamma = 0.0;
  double l1_zero_filled = 0.0;
  double l1_final = 0.0;
};

/// Douglas-Rachford splitting for min ||W u||_1 subject to the measured Fourier
/// coefficients of u equalling y. Runs a fixed budget; non-convergence is reported
/// through `residual`, not thrown.
ReconResult reconstruct(const std::vector<Complex>& y, const SamplingMask& mask, const ReconConfig& config = {});

/// Sum of |c| over the orthonormal wavelet coefficients of img.
double wavelet_l1(const Image& img, Wavelet w, int levels);

inline constexpr double kSnrCapDb = 300.0;

/// 20 log10(||reference|| / ||reference - estimate||), capped at kSnrCapDb.
double snr_db(const Image& reference, const Image& estimate);

}  // namespace vds
