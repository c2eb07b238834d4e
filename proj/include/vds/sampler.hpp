#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vds/density.hpp"
#include "vds/rng.hpp"

namespace vds {

/// Ordered points in [0,1]^d, stored flat (point k occupies coords[k*dim, (k+1)*dim)).
struct PointSet {
  int dim = 2;
  std::vector<double> coords;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0; }
  bool empty() const noexcept { return coords.empty(); }
  std::span<const double> point(std::size_t k) const {
    return std::span<const double>(coords).subspan(k * static_cast<std::size_t>(dim),
                                                   static_cast<std::size_t>(dim));
  }
  void push_back(std::span<const double> p) { coords.insert(coords.end(), p.begin(), p.end()); }
};

/// Throws unless every coordinate lies in [0,1] and the storage matches dim.
void validate_unit_cube(const PointSet& ps);

/// Streaming i.i.d. sampler over a piecewise-constant density.
///
/// Each draw consumes one uniform for the cell (inverse CDF over cumulative cell
/// masses) and then d uniforms for the position inside the cell, so the first n
/// draws of a stream never depend on how many more are requested.
class PointSampler {
 public:
  PointSampler(const DensityGrid& g, std::uint64_t seed);

  int dim() const noexcept { return dim_; }
  /// Writes the next point into `out` (size dim).
  void next(std::span<double> out);

 private:
  int dim_;
  int resolution_;
  std::vector<double> cumulative_;
  Rng rng_;
  std::vector<int> cell_;
};

PointSet draw_points(const DensityGrid& g, std::size_t n, std::uint64_t seed);

/// Point counts per cell of the m^d partition (row-major, last axis fastest).
std::vector<std::uint64_t> empirical_cell_histogram(const PointSet& ps, int m);

}  // namespace vds
