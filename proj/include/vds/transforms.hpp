#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace vds {

using Complex = std::complex<double>;

bool is_power_of_two(int n) noexcept;
int log2_exact(int n) noexcept;

/// In-place unitary 2-D DFT of a row-major side x side array (side a power of two).
/// Scaled by 1/side so that forward and inverse are both isometries.
void dft2_unitary(std::span<Complex> data, int side, bool inverse);

/// Unitary DFT with the zero frequency moved to bin (side/2, side/2).
std::vector<Complex> centered_dft(std::span<const Complex> image, int side);
std::vector<Complex> centered_idft(std::span<const Complex> kspace, int side);

enum class Wavelet { haar, daubechies4 };

std::string_view to_string(Wavelet w) noexcept;
Wavelet parse_wavelet(std::string_view name);

/// Largest admissible decomposition depth for a side length.
int max_wavelet_levels(int side, Wavelet w) noexcept;

/// Orthonormal separable 2-D wavelet transform with periodic boundaries, in place,
/// Mallat layout (coarse approximation in the top-left block).
void wavelet_forward(std::span<Complex> data, int side, Wavelet w, int levels);
void wavelet_inverse(std::span<Complex> data, int side, Wavelet w, int levels);

}  // namespace vds
