#include "vds/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>

#include "vds/calibration.hpp"
#include "vds/error.hpp"
#include "vds/parallel.hpp"
#include "vds/rng.hpp"
#include "vds/sampler.hpp"
#include "vds/trajectory.hpp"

namespace vds {

namespace {

// Stream ids under a run seed.
constexpr std::uint64_t kDrawStream = 1;
constexpr std::uint64_t kTspStream = 2;
constexpr std::uint64_t kBetaStream = 3;

SamplingMask iid_mask(const DensityGrid& target, int side, std::size_t goal, std::uint64_t seed,
                      std::size_t* drawings) {
  SamplingMask mask(side);
  PointSampler sampler(target, derive_seed(seed, kDrawStream));
  const std::size_t cap = 1000 * static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  double p[2];
  std::size_t drawn = 0;
  while (mask.sampled_count() < goal) {
    if (drawn == cap) {
      throw Error(ErrorCode::UnreachableTarget, "independent drawing could not fill " + std::to_string(goal) +
                                                    " bins; the density has too little support");
    }
    sampler.next(p);
    ++drawn;
    const auto bx = static_cast<std::size_t>(partition_index(p[0], side));
    const auto by = static_cast<std::size_t>(partition_index(p[1], side));
    mask.set(bx * static_cast<std::size_t>(side) + by);
  }
  if (drawings) *drawings = drawn;
  return mask;
}

SamplingMask tsp_mask(const DensityGrid& drawing, int side, std::size_t n, std::uint64_t seed,
                      const HeuristicConfig& tsp) {
  const PointSet ps = draw_points(drawing, n, derive_seed(seed, kDrawStream));
  HeuristicConfig config = tsp;
  config.seed = derive_seed(seed, kTspStream);
  const Tour tour = solve_heuristic(ps, config);
  const Trajectory traj = parameterize(ps, tour);
  return mask_from_points(resample(traj, 1.0 / side), side);
}

}  // namespace

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::iid_target: return "iid-target";
    case Scheme::tsp_target: return "tsp-target";
    case Scheme::tsp_adjusted: return "tsp-adjusted";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "iid-target") return Scheme::iid_target;
  if (name == "tsp-target") return Scheme::tsp_target;
  if (name == "tsp-adjusted") return Scheme::tsp_adjusted;
  throw Error(ErrorCode::ConfigError, "unknown scheme '" + std::string(name) + "'");
}

std::size_t target_mask_count(int side, double acceleration) {
  if (!(acceleration >= 1.0)) throw Error(ErrorCode::ConfigError, "acceleration must be >= 1");
  const double total = static_cast<double>(side) * side;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(total / acceleration)));
}

SamplingMask build_mask(const ExperimentConfig& config, Scheme scheme, std::uint64_t seed, double beta,
                        std::size_t* drawings) {
  if (config.target.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "experiments need a 2-D density");
  const int side = config.side;
  const std::size_t goal = target_mask_count(side, config.acceleration);
  if (scheme == Scheme::iid_target) return iid_mask(config.target, side, goal, seed, drawings);

  const DensityGrid drawing =
      scheme == Scheme::tsp_adjusted ? tsp_adjusted_density(config.target) : config.target;
  const double tol = config.count_tolerance * static_cast<double>(goal);
  const auto within = [&](std::size_t count) {
    return std::abs(static_cast<double>(count) - static_cast<double>(goal)) <= tol;
  };

  // The path revisits bins, so the calibrated count is only a starting point; then a
  // multiplicative update until the goal is bracketed, then bisection on N.
  std::size_t n = std::max<std::size_t>(2, choose_n(goal, 1.0 / side, drawing, beta));
  std::size_t lo = 0;  // largest N known to fall short
  std::size_t hi = 0;  // smallest N known to overshoot
  std::size_t best_n = n;
  double best_gap = std::numeric_limits<double>::infinity();
  SamplingMask best(side);
  for (int attempt = 0; attempt < 60; ++attempt) {
    SamplingMask mask = tsp_mask(drawing, side, n, seed, config.tsp);
    const std::size_t count = mask.sampled_count();
    const double gap = std::abs(static_cast<double>(count) - static_cast<double>(goal));
    if (gap < best_gap) {
      best_gap = gap;
      best_n = n;
      best = std::move(mask);
    }
    if (within(count)) break;
    if (count < goal) {
      lo = std::max(lo, n);
    } else {
      hi = hi == 0 ? n : std::min(hi, n);
    }
    std::size_t next;
    if (lo > 0 && hi > 0) {
      if (hi - lo <= 1) break;
      next = lo + (hi - lo) / 2;
    } else {
      const double ratio = std::clamp(static_cast<double>(goal) / std::max<std::size_t>(count, 1), 0.25, 4.0);
      next = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio * ratio));
      next = std::max<std::size_t>(next, 2);
      if (next == n) next = count < goal ? n + 1 : n - 1;
    }
    n = next;
  }
  if (!within(best.sampled_count())) {
    throw Error(ErrorCode::UnreachableTarget,
                "could not reach " + std::to_string(goal) + " bins within tolerance; best " +
                    std::to_string(best.sampled_count()) + " at N=" + std::to_string(best_n));
  }
  if (drawings) *drawings = best_n;
  return best;
}

std::vector<ExperimentRun> run_experiment(const ExperimentConfig& config) {
  if (config.schemes.empty() || config.seeds.empty()) {
    throw Error(ErrorCode::ConfigError, "experiment needs at least one scheme and one seed");
  }
  const Image phantom = shepp_logan(config.side);
  const bool needs_beta = std::any_of(config.schemes.begin(), config.schemes.end(),
                                      [](Scheme s) { return s != Scheme::iid_target; });
  double beta = config.beta.value_or(0.0);
  if (needs_beta && !config.beta) {
    beta = estimate_beta(2, 10000, 20, derive_seed(config.seeds.front(), kBetaStream), config.tsp, config.threads).beta;
  }

  std::vector<ExperimentRun> runs;
  for (Scheme s : config.schemes) {
    for (std::uint64_t seed : config.seeds) {
      ExperimentRun run;
      run.scheme = s;
      run.seed = seed;
      run.side = config.side;
      run.acceleration = config.acceleration;
      runs.push_back(std::move(run));
    }
  }

  parallel_for(runs.size(), config.threads, [&](std::size_t i) {
    auto& run = runs[i];
    run.mask = build_mask(config, run.scheme, run.seed, beta, &run.drawings);
    run.recon = reconstruct(measure(phantom, run.mask), run.mask, config.recon);
    run.snr_db = snr_db(phantom, run.recon.image);
  });
  return runs;
}

}  // namespace vds
