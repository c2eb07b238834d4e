#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vds/density.hpp"
#include "vds/sampler.hpp"
#include "vds/tsp.hpp"

namespace vds {

/// Constant-speed parameterization of an open polyline.
class Trajectory {
 public:
  /// `vertices` in visit order; throws DegeneratePath when the total length is zero.
  explicit Trajectory(PointSet vertices);

  int dim() const noexcept { return vertices_.dim; }
  const PointSet& vertices() const noexcept { return vertices_; }
  std::span<const double> cumulative_lengths() const noexcept { return cumulative_; }
  double total_length() const noexcept { return cumulative_.back(); }
  std::size_t segment_count() const noexcept { return vertices_.size() - 1; }

  /// Point at arc length s * total_length; s is clamped to [0,1].
  std::vector<double> evaluate(double s) const;
  void evaluate_at_arc(double arc, std::span<double> out) const;

 private:
  PointSet vertices_;
  std::vector<double> cumulative_;
};

Trajectory parameterize(const PointSet& ps, const Tour& tour);

/// Points at arc lengths 0, dt, 2dt, ... <= T; floor(T/dt) + 1 of them.
PointSet resample(const Trajectory& traj, double delta_t);

/// Nonnegative masses over the m^d partition, row-major with last axis fastest.
struct PartitionMasses {
  int dim = 2;
  int m = 1;
  std::vector<double> masses;
};

/// Occupation measure of the curve: fraction of arc length inside each cell.
using EmpiricalDistribution = PartitionMasses;

/// Per-cell arc-length fractions by exact clipping of every segment at the planes
/// x_j = k/m. Each piece is credited to the cell containing its midpoint.
EmpiricalDistribution empirical_distribution(const Trajectory& traj, int m);

/// Exact cell masses of a piecewise-constant density over the m^d partition.
/// The density resolution need not be a multiple of m.
PartitionMasses partition_masses(const DensityGrid& g, int m);

/// Sums blocks of factor^d children; requires m % factor == 0.
PartitionMasses coarsen(const PartitionMasses& fine, int factor);

/// Half the l1 distance between two partition mass vectors.
double tv_distance(const PartitionMasses& a, const PartitionMasses& b);

/// Normalized point histogram as a PartitionMasses (empty sets give all zeros).
PartitionMasses histogram_masses(const PointSet& ps, int m);

}  // namespace vds
