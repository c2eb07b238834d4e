#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vds/sampler.hpp"

namespace vds {

enum class TourMethod { exact, heuristic };

std::string_view to_string(TourMethod method) noexcept;

/// Open Hamiltonian path: visit order over a PointSet plus its Euclidean length.
struct Tour {
  std::vector<std::size_t> order;
  double length = 0.0;
  TourMethod method = TourMethod::heuristic;
};

/// Sum of consecutive Euclidean distances along `order`; throws InvalidPermutation.
double path_length(const PointSet& ps, std::span<const std::size_t> order);

inline constexpr std::size_t kMaxExactPoints = 12;

/// Global optimum by subset dynamic programming. Among optimal paths the
/// lexicographically smallest order is returned (its first index is below its last).
Tour solve_exact(const PointSet& ps);

struct HeuristicConfig {
  int neighbor_list_size = 16;
  int two_opt_max_passes = 30;
  /// Number of nearest-neighbour starts, each followed by 2-opt; the shortest result
  /// wins. 0 picks max(1, 256 / N) so that only small instances restart.
  int starts = 0;
  /// Seeds the 2-opt visiting order and the choice of additional start points.
  std::uint64_t seed = 0;
};

/// Start count used for an instance of n points under `config`.
std::size_t heuristic_start_count(std::size_t n, const HeuristicConfig& config) noexcept;

/// Statistics of the winning start.
struct HeuristicTrace {
  std::size_t start = 0;
  double construction_length = 0.0;
  /// Path length after each completed 2-opt pass.
  std::vector<double> pass_lengths;
  std::size_t moves = 0;
};

/// Nearest-neighbour construction, then 2-opt restricted to k-nearest-neighbour
/// candidate lists. The first start is the point closest to the sample centroid;
/// further starts (see HeuristicConfig::starts) are drawn from the seed.
Tour solve_heuristic(const PointSet& ps, const HeuristicConfig& config = {},
                     HeuristicTrace* trace = nullptr);

/// k nearest neighbours of every point (excluding itself), sorted by distance.
/// Backed by a uniform bucket grid over the bounding box.
std::vector<std::vector<std::size_t>> nearest_neighbor_lists(const PointSet& ps, std::size_t k);

}  // namespace vds
