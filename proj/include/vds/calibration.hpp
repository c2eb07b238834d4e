#pragma once

#include <cstddef>
#include <cstdint>

#include "vds/density.hpp"
#include "vds/tsp.hpp"

namespace vds {

/// Monte-Carlo estimate of the constant beta(d) in T(N) ~ beta(d) N^((d-1)/d) on the
/// uniform unit hypercube.
struct BetaEstimate {
  int dim = 2;
  double beta = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::size_t n_per_trial = 0;
  std::uint64_t seed = 0;
};

/// Runs `trials` independent uniform drawings (trial t uses derive_seed(seed, t)),
/// solves each with solve_heuristic and reports mean and standard error of
/// T / N^((d-1)/d). Biased upward by the heuristic's optimality gap.
/// Trials run on up to `threads` workers (0 = hardware concurrency); the result
/// does not depend on the thread count.
BetaEstimate estimate_beta(int dim, std::size_t n_per_trial, std::size_t trials, std::uint64_t seed,
                           const HeuristicConfig& tsp = {}, unsigned threads = 0);

/// Integral of p^((d-1)/d) over the unit hypercube for a piecewise-constant p.
double length_integral(const DensityGrid& drawing);

/// Expected TSP length for n points drawn from `drawing`:
/// n^((d-1)/d) * beta * integral(p^((d-1)/d)).
double expected_length(std::size_t n, const DensityGrid& drawing, double beta);

/// Smallest N whose predicted resampled count floor(L(N)/delta_t) + 1 reaches
/// target_samples. Starts from the closed-form inverse
/// ceil((target * delta_t / (beta * I))^(d/(d-1))) and corrects by unit steps.
///
/// The often-quoted form N = floor(delta_t * L^-1(target)) puts delta_t on the wrong
/// side: L^-1 already returns a count, so the length target is target * delta_t.
std::size_t choose_n(std::size_t target_samples, double delta_t, const DensityGrid& drawing, double beta);

}  // namespace vds
