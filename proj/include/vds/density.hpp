#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vds {

/// Piecewise-constant density on a regular r^d grid over [0,1]^d.
///
/// Values are stored row-major with the last axis fastest; cell (i_0, ..., i_{d-1})
/// covers [i_0/r, (i_0+1)/r) x ... and its flat index is sum_j i_j * r^(d-1-j).
class DensityGrid {
 public:
  /// Validates shape and values (finite, nonnegative, not all zero).
  DensityGrid(int dim, int resolution, std::vector<double> values);

  static DensityGrid uniform(int dim, int resolution);

  int dim() const noexcept { return dim_; }
  int resolution() const noexcept { return resolution_; }
  std::size_t cell_count() const noexcept { return values_.size(); }
  double cell_volume() const noexcept { return cell_volume_; }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t index) const { return values_.at(index); }

  /// True when the grid integrates to one within 1e-9.
  bool normalized() const noexcept { return normalized_; }
  double integral() const noexcept;

  std::size_t flat_index(std::span<const int> cell) const;
  std::vector<int> cell_of(std::size_t index) const;
  /// Cell containing `point`; coordinates equal to 1 map to the last cell.
  std::size_t locate(std::span<const double> point) const;

 private:
  int dim_;
  int resolution_;
  double cell_volume_;
  std::vector<double> values_;
  bool normalized_;
};

/// Cells per grid for a given dimension and resolution; throws on overflow.
std::size_t grid_cell_count(int dim, int resolution);

/// Index of the partition cell containing coordinate x in [0,1] at resolution m,
/// with x == 1 assigned to the last cell.
int partition_index(double x, int m) noexcept;

DensityGrid normalize(const DensityGrid& raw);

/// The density to draw from so the TSP curve occupies `target`: target^(d/(d-1)), normalized.
DensityGrid tsp_adjusted_density(const DensityGrid& target);

/// Inverse map of tsp_adjusted_density: drawing^((d-1)/d), normalized.
DensityGrid inverse_adjusted_density(const DensityGrid& drawing);

/// Each value raised to `exponent` (0^p := 0), then normalized.
DensityGrid power_density(const DensityGrid& g, double exponent);

/// Radially decaying density around the hypercube center. Cells whose center lies
/// within plateau_radius/2 take value 1, others (plateau_radius/2 / dist)^decay.
/// With plateau_radius == 0 the cell containing the center is the plateau.
DensityGrid radial_polynomial_density(int dim, int resolution, double decay,
                                      double plateau_radius);

double cell_mass(const DensityGrid& g, std::size_t cell_index);

}  // namespace vds
