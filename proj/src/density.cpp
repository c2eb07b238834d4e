#include "vds/density.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vds/error.hpp"

namespace vds {

std::size_t grid_cell_count(int dim, int resolution) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (resolution < 1) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 1");
  std::size_t count = 1;
  for (int j = 0; j < dim; ++j) {
    if (count > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(resolution)) {
      throw Error(ErrorCode::InvalidArgument, "grid too large");
    }
    count *= static_cast<std::size_t>(resolution);
  }
  return count;
}

int partition_index(double x, int m) noexcept {
  const double scaled = std::floor(x * m);
  if (!(scaled >= 0.0)) return 0;
  if (scaled >= m) return m - 1;
  return static_cast<int>(scaled);
}

DensityGrid::DensityGrid(int dim, int resolution, std::vector<double> values)
    : dim_(dim), resolution_(resolution), values_(std::move(values)) {
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "density dimension must be >= 2");
  const std::size_t cells = grid_cell_count(dim, resolution);
  if (values_.size() != cells) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(cells) +
                                                " values, got " + std::to_string(values_.size()));
  }
  bool any_positive = false;
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "density value is not finite");
    if (v < 0.0) throw Error(ErrorCode::NegativeValue, "density value is negative");
    any_positive = any_positive || v > 0.0;
  }
  if (!any_positive) throw Error(ErrorCode::AllZeroDensity, "every density value is zero");
  cell_volume_ = 1.0 / static_cast<double>(cells);
  normalized_ = std::abs(integral() - 1.0) <= 1e-9;
}

DensityGrid DensityGrid::uniform(int dim, int resolution) {
  return DensityGrid(dim, resolution, std::vector<double>(grid_cell_count(dim, resolution), 1.0));
}

double DensityGrid::integral() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0) * cell_volume_;
}

std::size_t DensityGrid::flat_index(std::span<const int> cell) const {
  if (static_cast<int>(cell.size()) != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "cell multi-index has wrong dimension");
  }
  std::size_t index = 0;
  for (int c : cell) {
    if (c < 0 || c >= resolution_) throw Error(ErrorCode::IndexOutOfRange, "cell coordinate");
    index = index * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(c);
  }
  return index;
}

std::vector<int> DensityGrid::cell_of(std::size_t index) const {
  if (index >= values_.size()) throw Error(ErrorCode::IndexOutOfRange, "cell index");
  std::vector<int> cell(static_cast<std::size_t>(dim_));
  for (int j = dim_ - 1; j >= 0; --j) {
    cell[static_cast<std::size_t>(j)] = static_cast<int>(index % static_cast<std::size_t>(resolution_));
    index /= static_cast<std::size_t>(resolution_);
  }
  return cell;
}

std::size_t DensityGrid::locate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "point has wrong dimension");
  }
  std::size_t index = 0;
  for (double x : point) {
    index = index * static_cast<std::size_t>(resolution_) +
            static_cast<std::size_t>(partition_index(x, resolution_));
  }
  return index;
}

DensityGrid normalize(const DensityGrid& raw) {
  const double total = raw.integral();
  std::vector<double> values(raw.values().begin(), raw.values().end());
  for (double& v : values) v /= total;
  return DensityGrid(raw.dim(), raw.resolution(), std::move(values));
}

DensityGrid power_density(const DensityGrid& g, double exponent) {
  std::vector<double> values(g.values().begin(), g.values().end());
  for (double& v : values) v = v > 0.0 ? std::pow(v, exponent) : 0.0;
  return normalize(DensityGrid(g.dim(), g.resolution(), std::move(values)));
}

DensityGrid tsp_adjusted_density(const DensityGrid& target) {
  const double d = target.dim();
  return power_density(target, d / (d - 1.0));
}

DensityGrid inverse_adjusted_density(const DensityGrid& drawing) {
  const double d = drawing.dim();
  return power_density(drawing, (d - 1.0) / d);
}

DensityGrid radial_polynomial_density(int dim, int resolution, double decay,
                                      double plateau_radius) {
  if (!(decay > 0.0) || !std::isfinite(decay)) {
    throw Error(ErrorCode::InvalidDecay, "decay must be positive and finite");
  }
  if (!(plateau_radius >= 0.0 && plateau_radius < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "plateau_radius must lie in [0, 1)");
  }
  if (resolution < 2) throw Error(ErrorCode::InvalidArgument, "radial density needs r >= 2");
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "density dimension must be >= 2");

  const std::size_t cells = grid_cell_count(dim, resolution);
  const double rho0 = 0.5 * plateau_radius;
  const int center_cell = partition_index(0.5, resolution);
  std::vector<double> values(cells);
  std::vector<int> cell(static_cast<std::size_t>(dim));
  for (std::size_t index = 0; index < cells; ++index) {
    std::size_t rest = index;
    for (int j = dim - 1; j >= 0; --j) {
      cell[static_cast<std::size_t>(j)] = static_cast<int>(rest % static_cast<std::size_t>(resolution));
      rest /= static_cast<std::size_t>(resolution);
    }
    double dist2 = 0.0;
    bool is_center_cell = true;
    for (int c : cell) {
      const double offset = (c + 0.5) / resolution - 0.5;
      dist2 += offset * offset;
      is_center_cell = is_center_cell && c == center_cell;
    }
    const double dist = std::sqrt(dist2);
    if (dist <= rho0 || (rho0 == 0.0 && is_center_cell)) {
      values[index] = 1.0;
    } else {
      values[index] = std::pow(rho0 / dist, decay);
    }
  }
  return normalize(DensityGrid(dim, resolution, std::move(values)));
}

double cell_mass(const DensityGrid& g, std::size_t cell_index) {
  if (cell_index >= g.cell_count()) throw Error(ErrorCode::IndexOutOfRange, "cell index");
  return g.value(cell_index) * g.cell_volume();
}

}  // namespace vds
