#include "vds/sampler.hpp"

#include <algorithm>

#include "vds/error.hpp"

namespace vds {

void validate_unit_cube(const PointSet& ps) {
  if (ps.dim < 1) throw Error(ErrorCode::InvalidArgument, "point dimension must be >= 1");
  if (ps.coords.size() % static_cast<std::size_t>(ps.dim) != 0) {
    throw Error(ErrorCode::InvalidArgument, "coordinate count is not a multiple of dim");
  }
  for (double x : ps.coords) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::InvalidArgument, "coordinate outside [0,1]");
  }
}

PointSampler::PointSampler(const DensityGrid& g, std::uint64_t seed)
    : dim_(g.dim()),
      resolution_(g.resolution()),
      cumulative_(g.cell_count()),
      rng_(seed),
      cell_(static_cast<std::size_t>(g.dim())) {
  double running = 0.0;
  const auto values = g.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    running += values[i];
    cumulative_[i] = running;
  }
}

void PointSampler::next(std::span<double> out) {
  const double u = rng_.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  // u < total always holds, but rounding in u * total can land exactly on it.
  if (it == cumulative_.end()) --it;
  // Skip zero-mass cells that share the cumulative value.
  std::size_t index = static_cast<std::size_t>(it - cumulative_.begin());
  while (index > 0 && cumulative_[index] == cumulative_[index - 1]) --index;

  const auto r = static_cast<std::size_t>(resolution_);
  for (int j = dim_ - 1; j >= 0; --j) {
    cell_[static_cast<std::size_t>(j)] = static_cast<int>(index % r);
    index /= r;
  }
  for (int j = 0; j < dim_; ++j) {
    const double x = (cell_[static_cast<std::size_t>(j)] + rng_.uniform()) / resolution_;
    out[static_cast<std::size_t>(j)] = std::min(x, 1.0);
  }
}

PointSet draw_points(const DensityGrid& g, std::size_t n, std::uint64_t seed) {
  PointSet ps;
  ps.dim = g.dim();
  ps.seed = seed;
  ps.coords.resize(n * static_cast<std::size_t>(g.dim()));
  PointSampler sampler(g, seed);
  for (std::size_t k = 0; k < n; ++k) {
    sampler.next(std::span<double>(ps.coords).subspan(k * static_cast<std::size_t>(g.dim()),
                                                      static_cast<std::size_t>(g.dim())));
  }
  return ps;
}

std::vector<std::uint64_t> empirical_cell_histogram(const PointSet& ps, int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "partition resolution must be >= 1");
  const std::size_t cells = grid_cell_count(ps.dim, m);
  std::vector<std::uint64_t> counts(cells, 0);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    std::size_t index = 0;
    for (double x : ps.point(k)) {
      index = index * static_cast<std::size_t>(m) + static_cast<std::size_t>(partition_index(x, m));
    }
    ++counts[index];
  }
  return counts;
}

}  // namespace vds
