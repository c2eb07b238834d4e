#include "vds/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "vds/error.hpp"
#include "vds/parallel.hpp"
#include "vds/rng.hpp"
#include "vds/sampler.hpp"

namespace vds {

BetaEstimate estimate_beta(int dim, std::size_t n_per_trial, std::size_t trials, std::uint64_t seed,
                           const HeuristicConfig& tsp, unsigned threads) {
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 2");
  if (n_per_trial < 100) throw Error(ErrorCode::InvalidArgument, "n_per_trial must be >= 100");
  if (trials < 2) throw Error(ErrorCode::InvalidArgument, "trials must be >= 2");

  const DensityGrid uniform = DensityGrid::uniform(dim, 1);
  const double scale = std::pow(static_cast<double>(n_per_trial), (dim - 1.0) / dim);
  std::vector<double> ratios(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const PointSet ps = draw_points(uniform, n_per_trial, derive_seed(seed, t));
    HeuristicConfig config = tsp;
    config.seed = derive_seed(tsp.seed ^ seed, t);
    ratios[t] = solve_heuristic(ps, config).length / scale;
  });

  // Fixed summation order keeps the result independent of scheduling.
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= static_cast<double>(trials - 1);

  BetaEstimate est;
  est.dim = dim;
  est.beta = mean;
  est.std_error = std::sqrt(var / static_cast<double>(trials));
  est.trials = trials;
  est.n_per_trial = n_per_trial;
  est.seed = seed;
  return est;
}

double length_integral(const DensityGrid& drawing) {
  const double exponent = (drawing.dim() - 1.0) / drawing.dim();
  double s = 0.0;
  for (double v : drawing.values()) s += v > 0.0 ? std::pow(v, exponent) : 0.0;
  return s * drawing.cell_volume();
}

double expected_length(std::size_t n, const DensityGrid& drawing, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  const double d = drawing.dim();
  return std::pow(static_cast<double>(n), (d - 1.0) / d) * beta * length_integral(drawing);
}

std::size_t choose_n(std::size_t target_samples, double delta_t, const DensityGrid& drawing, double beta) {
  if (target_samples == 0) throw Error(ErrorCode::UnreachableTarget, "target sample count must be >= 1");
  if (!(delta_t > 0.0) || !std::isfinite(delta_t)) throw Error(ErrorCode::InvalidStep, "delta_t must be positive");
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  const double d = drawing.dim();
  const double integral = length_integral(drawing);
  const auto reaches = [&](std::size_t n) {
    const double predicted = std::floor(expected_length(n, drawing, beta) / delta_t) + 1.0;
    return predicted >= static_cast<double>(target_samples);
  };
  const double closed_form =
      std::ceil(std::pow(static_cast<double>(target_samples) * delta_t / (beta * integral), d / (d - 1.0)));
  if (!(closed_form < 1e18)) throw Error(ErrorCode::UnreachableTarget, "required N overflows");
  std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(closed_form));
  while (!reaches(n)) ++n;
  while (n > 1 && reaches(n - 1)) --n;
  return n;
}

}  // namespace vds
