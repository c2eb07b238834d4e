#include "vds/transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vds/error.hpp"

namespace vds {

bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(int n) noexcept {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

namespace {

void fft1(Complex* x, std::size_t stride, int n, bool inverse, std::vector<Complex>& scratch) {
  scratch.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) scratch[i] = x[i * stride];
  // Bit-reversal permutation.
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(scratch[i], scratch[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len / 2;
    for (int k = 0; k < half; ++k) {
      const double angle = sign * 2.0 * std::numbers::pi * k / len;
      const Complex w(std::cos(angle), std::sin(angle));
      for (int i = 0; i < n; i += len) {
        const Complex u = scratch[i + k];
        const Complex v = scratch[i + k + half] * w;
        scratch[i + k] = u + v;
        scratch[i + k + half] = u - v;
      }
    }
  }
  for (int i = 0; i < n; ++i) x[i * stride] = scratch[i];
}

void check_side(std::size_t size, int side) {
  if (!is_power_of_two(side)) throw Error(ErrorCode::InvalidSide, "side must be a power of two");
  if (size != static_cast<std::size_t>(side) * static_cast<std::size_t>(side)) {
    throw Error(ErrorCode::SideMismatch, "array size differs from side^2");
  }
}

struct Filters {
  std::vector<double> lo;
  std::vector<double> hi;
};

Filters filters_for(Wavelet w) {
  Filters f;
  if (w == Wavelet::haar) {
    const double s = 1.0 / std::numbers::sqrt2;
    f.lo = {s, s};
  } else {
    const double r3 = std::sqrt(3.0);
    const double c = 4.0 * std::numbers::sqrt2;
    f.lo = {(1 + r3) / c, (3 + r3) / c, (3 - r3) / c, (1 - r3) / c};
  }
  const std::size_t len = f.lo.size();
  f.hi.resize(len);
  for (std::size_t k = 0; k < len; ++k) f.hi[k] = (k % 2 == 0 ? 1.0 : -1.0) * f.lo[len - 1 - k];
  return f;
}

void analyze(Complex* x, std::size_t stride, int len, const Filters& f, std::vector<Complex>& tmp) {
  tmp.assign(static_cast<std::size_t>(len), Complex{});
  const int half = len / 2;
  const int taps = static_cast<int>(f.lo.size());
  for (int i = 0; i < half; ++i) {
    Complex a{}, d{};
    for (int k = 0; k < taps; ++k) {
      const Complex v = x[((2 * i + k) % len) * stride];
      a += f.lo[k] * v;
      d += f.hi[k] * v;
    }
    tmp[i] = a;
    tmp[half + i] = d;
  }
  for (int i = 0; i < len; ++i) x[i * stride] = tmp[i];
}

void synthesize(Complex* x, std::size_t stride, int len, const Filters& f, std::vector<Complex>& tmp) {
  tmp.assign(static_cast<std::size_t>(len), Complex{});
  const int half = len / 2;
  const int taps = static_cast<int>(f.lo.size());
  for (int i = 0; i < half; ++i) {
    const Complex a = x[i * stride];
    const Complex d = x[(half + i) * stride];
    for (int k = 0; k < taps; ++k) tmp[(2 * i + k) % len] += f.lo[k] * a + f.hi[k] * d;
  }
  for (int i = 0; i < len; ++i) x[i * stride] = tmp[i];
}

void check_levels(int side, Wavelet w, int levels) {
  if (levels < 1 || levels > max_wavelet_levels(side, w)) {
    throw Error(ErrorCode::ConfigError, "wavelet levels " + std::to_string(levels) +
                                            " incompatible with side " + std::to_string(side));
  }
}

}  // namespace

void dft2_unitary(std::span<Complex> data, int side, bool inverse) {
  check_side(data.size(), side);
  std::vector<Complex> scratch;
  const auto n = static_cast<std::size_t>(side);
  for (std::size_t r = 0; r < n; ++r) fft1(data.data() + r * n, 1, side, inverse, scratch);
  for (std::size_t c = 0; c < n; ++c) fft1(data.data() + c, n, side, inverse, scratch);
  const double scale = 1.0 / side;
  for (auto& v : data) v *= scale;
}

std::vector<Complex> centered_dft(std::span<const Complex> image, int side) {
  std::vector<Complex> k(image.begin(), image.end());
  dft2_unitary(k, side, false);
  std::vector<Complex> out(k.size());
  const int h = side / 2;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b)
      out[static_cast<std::size_t>(a) * side + b] = k[static_cast<std::size_t>((a + h) % side) * side + (b + h) % side];
  return out;
}

std::vector<Complex> centered_idft(std::span<const Complex> kspace, int side) {
  check_side(kspace.size(), side);
  std::vector<Complex> k(kspace.size());
  const int h = side / 2;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b)
      k[static_cast<std::size_t>((a + h) % side) * side + (b + h) % side] = kspace[static_cast<std::size_t>(a) * side + b];
  dft2_unitary(k, side, true);
  return k;
}

std::string_view to_string(Wavelet w) noexcept { return w == Wavelet::haar ? "haar" : "db4"; }

Wavelet parse_wavelet(std::string_view name) {
  if (name == "haar") return Wavelet::haar;
  if (name == "db4" || name == "daubechies4" || name == "daubechies-4") return Wavelet::daubechies4;
  throw Error(ErrorCode::ConfigError, "unknown wavelet '" + std::string(name) + "'");
}

int max_wavelet_levels(int side, Wavelet w) noexcept {
  if (!is_power_of_two(side)) return 0;
  const int full = log2_exact(side);
  return w == Wavelet::haar ? full : full - 1;
}

void wavelet_forward(std::span<Complex> data, int side, Wavelet w, int levels) {
  check_side(data.size(), side);
  check_levels(side, w, levels);
  const Filters f = filters_for(w);
  std::vector<Complex> tmp;
  const auto n = static_cast<std::size_t>(side);
  for (int level = 0, len = side; level < levels; ++level, len /= 2) {
    for (int r = 0; r < len; ++r) analyze(data.data() + r * n, 1, len, f, tmp);
    for (int c = 0; c < len; ++c) analyze(data.data() + c, n, len, f, tmp);
  }
}

void wavelet_inverse(std::span<Complex> data, int side, Wavelet w, int levels) {
  check_side(data.size(), side);
  check_levels(side, w, levels);
  const Filters f = filters_for(w);
  std::vector<Complex> tmp;
  const auto n = static_cast<std::size_t>(side);
  for (int level = levels - 1; level >= 0; --level) {
    const int len = side >> level;
    for (int c = 0; c < len; ++c) synthesize(data.data() + c, n, len, f, tmp);
    for (int r = 0; r < len; ++r) synthesize(data.data() + r * n, 1, len, f, tmp);
  }
}

}  // namespace vds
