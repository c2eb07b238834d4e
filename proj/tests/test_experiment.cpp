#include <doctest.h>

#include <cmath>

#include "vds/error.hpp"
#include "vds/experiment.hpp"
#include "vds/io.hpp"

using namespace vds;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.side = 32;
  cfg.target = radial_polynomial_density(2, 32, 2.0, 0.2);
  cfg.seeds = {1, 2};
  cfg.recon.iterations = 40;
  cfg.beta = 0.765;
  return cfg;
}

}  // namespace

TEST_CASE("scheme names") {
  for (auto s : {Scheme::iid_target, Scheme::tsp_target, Scheme::tsp_adjusted}) CHECK(parse_scheme(to_string(s)) == s);
  CHECK_THROWS_AS(parse_scheme("random"), Error);
  CHECK(target_mask_count(128, 5.0) == 3277);
  CHECK(target_mask_count(32, 1.0) == 1024);
}

TEST_CASE("masks reach the requested cardinality") {
  auto cfg = small_config();
  cfg.side = 64;
  cfg.target = radial_polynomial_density(2, 64, 2.0, 0.2);
  const std::size_t target = target_mask_count(64, 5.0);
  for (auto scheme : {Scheme::iid_target, Scheme::tsp_target, Scheme::tsp_adjusted}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      std::size_t drawings = 0;
      const auto mask = build_mask(cfg, scheme, seed, 0.765, &drawings);
      CHECK(drawings > 0);
      if (scheme == Scheme::iid_target) {
        CHECK(mask.sampled_count() == target);
      } else {
        CHECK(std::abs(static_cast<double>(mask.sampled_count()) - target) <= 0.02 * target);
      }
    }
  }
}

TEST_CASE("full sampling hits the SNR cap") {
  auto cfg = small_config();
  cfg.acceleration = 1.0;
  cfg.schemes = {Scheme::iid_target};
  cfg.seeds = {3};
  const auto runs = run_experiment(cfg);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].mask.sampled_count() == 32 * 32);
  CHECK(runs[0].snr_db == kSnrCapDb);
}

TEST_CASE("experiments are deterministic and independent of the thread count") {
  auto cfg = small_config();
  cfg.threads = 1;
  const auto a = io::report_to_csv(run_experiment(cfg));
  cfg.threads = 4;
  const auto b = io::report_to_csv(run_experiment(cfg));
  CHECK(a == b);
  const auto rows = io::report_from_csv(a);
  REQUIRE(rows.size() == 6);
  // Scheme-major order as configured.
  CHECK(rows[0].scheme == "iid-target");
  CHECK(rows[1].seed == 2);
  CHECK(rows[2].scheme == "tsp-target");
  CHECK(rows[5].scheme == "tsp-adjusted");
}

TEST_CASE("every run satisfies the data constraint and lowers the l1 norm") {
  const auto runs = run_experiment(small_config());
  for (const auto& run : runs) {
    CHECK(run.recon.data_residual <= 1e-9);
    CHECK(run.recon.l1_final <= run.recon.l1_zero_filled);
  }
}
