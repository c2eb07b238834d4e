#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vds/density.hpp"
#include "vds/recon.hpp"
#include "vds/tsp.hpp"

namespace vds {

/// How a k-space mask is generated from the target density.
enum class Scheme {
  iid_target,    ///< independent draws from the target until the mask is full enough
  tsp_target,    ///< draws from the target linked by a TSP path
  tsp_adjusted,  ///< draws from target^(d/(d-1)) linked by a TSP path
};

std::string_view to_string(Scheme s) noexcept;
Scheme parse_scheme(std::string_view name);

struct ExperimentConfig {
  DensityGrid target = DensityGrid::uniform(2, 1);
  int side = 128;
  double acceleration = 5.0;
  std::vector<Scheme> schemes{Scheme::iid_target, Scheme::tsp_target, Scheme::tsp_adjusted};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  ReconConfig recon;
  HeuristicConfig tsp;
  /// Used for the initial guess of the number of drawings; estimated when absent.
  std::optional<double> beta;
  /// Allowed relative deviation of the mask cardinality from side^2 / acceleration.
  double count_tolerance = 0.02;
  unsigned threads = 0;
};

struct ExperimentRun {
  Scheme scheme = Scheme::iid_target;
  std::uint64_t seed = 0;
  int side = 0;
  double acceleration = 0.0;
  /// Points drawn before linking (or before the mask filled, for iid).
  std::size_t drawings = 0;
  SamplingMask mask{8};
  ReconResult recon{Image(8)};
  double snr_db = 0.0;
};

std::size_t target_mask_count(int side, double acceleration);

/// Mask for one scheme and seed. The iid scheme draws until exactly the target
/// cardinality is reached; TSP schemes search the number of drawings until the
/// resampled path (step 1/side) covers the target within `count_tolerance`.
SamplingMask build_mask(const ExperimentConfig& config, Scheme scheme, std::uint64_t seed, double beta,
                        std::size_t* drawings = nullptr);

/// Runs every (scheme, seed) pair; results are ordered scheme-major in config order.
std::vector<ExperimentRun> run_experiment(const ExperimentConfig& config);

}  // namespace vds
