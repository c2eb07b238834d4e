#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "vds/density.hpp"
#include "vds/error.hpp"
#include "vds/sampler.hpp"
#include "vds/trajectory.hpp"
#include "vds/tsp.hpp"

namespace {

vds::PointSet polyline(std::initializer_list<std::pair<double, double>> pts) {
  vds::PointSet ps;
  for (auto [x, y] : pts) {
    const double p[2] = {x, y};
    ps.push_back(p);
  }
  return ps;
}

std::vector<oracle::Pt> vertices_of(const vds::Trajectory& t) {
  std::vector<oracle::Pt> out;
  for (std::size_t k = 0; k < t.vertices().size(); ++k) out.push_back({t.vertices().point(k)[0], t.vertices().point(k)[1]});
  return out;
}

vds::Trajectory random_trajectory(std::size_t n, std::uint64_t seed) {
  const auto g = vds::radial_polynomial_density(2, 32, 2.0, 0.1);
  const auto ps = vds::draw_points(g, n, seed);
  return vds::parameterize(ps, vds::solve_heuristic(ps, {.seed = seed}));
}

double mass_sum(const vds::PartitionMasses& p) {
  double s = 0.0;
  for (double v : p.masses) s += v;
  return s;
}

}  // namespace

TEST_CASE("constant-speed evaluation") {
  const vds::Trajectory two(polyline({{0.2, 0.4}, {0.6, 0.8}}));
  const auto mid = two.evaluate(0.5);
  CHECK(mid[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(mid[1] == doctest::Approx(0.6).epsilon(1e-15));

  const vds::Trajectory corners(polyline({{0, 0}, {0, 1}, {1, 1}, {1, 0}}));
  CHECK(corners.total_length() == 3.0);
  const auto third = corners.evaluate(1.0 / 3.0);
  CHECK(std::abs(third[0]) <= 1e-15);
  CHECK(std::abs(third[1] - 1.0) <= 1e-15);
  CHECK(corners.evaluate(0.0) == std::vector<double>{0, 0});
  CHECK(corners.evaluate(1.0) == std::vector<double>{1, 0});
  const auto cum = corners.cumulative_lengths();
  CHECK(cum.front() == 0.0);
  CHECK(cum.back() == corners.total_length());
}

TEST_CASE("evaluated points lie on the polyline") {
  const auto traj = random_trajectory(60, 4);
  const auto verts = vertices_of(traj);
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const auto p = traj.evaluate(u(gen));
    double best = INFINITY;
    for (std::size_t i = 1; i < verts.size(); ++i) {
      best = std::min(best, oracle::point_segment_distance({p[0], p[1]}, verts[i - 1], verts[i]));
    }
    CHECK(best <= 1e-12);
  }
}

TEST_CASE("parameterize follows the tour order") {
  const auto ps = polyline({{1, 0}, {0, 0}, {0, 1}});
  vds::Tour t;
  t.order = {1, 0, 2};
  const auto traj = vds::parameterize(ps, t);
  CHECK(traj.vertices().point(0)[0] == 0.0);
  CHECK(traj.vertices().point(1)[0] == 1.0);
  CHECK(traj.total_length() == doctest::Approx(1.0 + std::sqrt(2.0)));
}

TEST_CASE("degenerate paths are rejected") {
  CHECK_THROWS_AS(vds::Trajectory(polyline({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}})), vds::Error);
  CHECK_THROWS_AS(vds::Trajectory(polyline({{0.5, 0.5}})), vds::Error);
}

TEST_CASE("resample places floor(T/dt)+1 points") {
  const vds::Trajectory seg(polyline({{0, 0}, {1, 0}}));
  CHECK(vds::resample(seg, 2.0).size() == 1);
  const auto five = vds::resample(seg, 0.25);
  REQUIRE(five.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(five.point(k)[0] == doctest::Approx(0.25 * k).epsilon(1e-15));

  const vds::Trajectory corners(polyline({{0, 0}, {0, 1}, {1, 1}, {1, 0}}));
  const auto seven = vds::resample(corners, 0.5);
  REQUIRE(seven.size() == 7);
  // Arc 1.0 is the second corner, arc 1.5 the middle of the top edge.
  CHECK(seven.point(2)[0] == 0.0);
  CHECK(seven.point(2)[1] == 1.0);
  CHECK(seven.point(3)[0] == doctest::Approx(0.5));
  CHECK(seven.point(3)[1] == doctest::Approx(1.0));
  CHECK(seven.point(6)[0] == doctest::Approx(1.0));
  CHECK(seven.point(6)[1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(vds::resample(seg, 0.0), vds::Error);
  CHECK_THROWS_AS(vds::resample(seg, -1.0), vds::Error);
}

TEST_CASE("occupation of axis-aligned and diagonal segments") {
  const auto bottom = vds::empirical_distribution(vds::Trajectory(polyline({{0, 0}, {1, 0}})), 2);
  // Flat index is x-cell * m + y-cell; the bottom edge y = 0 lies in y-cell 0.
  CHECK(bottom.masses == std::vector<double>{0.5, 0.0, 0.5, 0.0});

  const auto diag = vds::empirical_distribution(vds::Trajectory(polyline({{0, 0}, {1, 1}})), 2);
  CHECK(diag.masses[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(diag.masses[1] == 0.0);
  CHECK(diag.masses[2] == 0.0);
  CHECK(diag.masses[3] == doctest::Approx(0.5).epsilon(1e-15));

  // The top edge y = 1 belongs to the last cell.
  const auto top = vds::empirical_distribution(vds::Trajectory(polyline({{0, 1}, {1, 1}})), 2);
  CHECK(top.masses == std::vector<double>{0.0, 0.5, 0.0, 0.5});
}

TEST_CASE("exact clipping matches the Monte-Carlo occupation oracle") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto traj = random_trajectory(200, seed);
    const auto exact = vds::empirical_distribution(traj, 4);
    const auto mc = oracle::monte_carlo_occupation(vertices_of(traj), 4, 1000000, seed);
    CHECK(oracle::tv(exact.masses, mc) < 0.002);
    CHECK(std::abs(mass_sum(exact) - 1.0) <= 1e-9);
  }
}

TEST_CASE("mass is conserved and refinement is consistent") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto traj = random_trajectory(500, seed);
    for (int m : {1, 3, 4, 7, 8, 64}) CHECK(std::abs(mass_sum(vds::empirical_distribution(traj, m)) - 1.0) <= 1e-9);
    const auto fine = vds::coarsen(vds::empirical_distribution(traj, 8), 2);
    const auto direct = vds::empirical_distribution(traj, 4);
    for (std::size_t i = 0; i < direct.masses.size(); ++i) CHECK(std::abs(fine.masses[i] - direct.masses[i]) <= 1e-9);
  }
  // Three dimensions.
  const auto ps = vds::draw_points(vds::DensityGrid::uniform(3, 1), 100, 2);
  const auto traj3 = vds::parameterize(ps, vds::solve_heuristic(ps));
  const auto e8 = vds::empirical_distribution(traj3, 8);
  CHECK(std::abs(mass_sum(e8) - 1.0) <= 1e-9);
  const auto e4 = vds::empirical_distribution(traj3, 4);
  const auto c4 = vds::coarsen(e8, 2);
  for (std::size_t i = 0; i < e4.masses.size(); ++i) CHECK(std::abs(c4.masses[i] - e4.masses[i]) <= 1e-9);
}

TEST_CASE("resampled histogram converges to the occupation measure") {
  const auto traj = random_trajectory(300, 12);
  const auto samples = vds::resample(traj, traj.total_length() / 1e5);
  const auto hist = vds::histogram_masses(samples, 4);
  CHECK(vds::tv_distance(hist, vds::empirical_distribution(traj, 4)) < 0.01);
}

TEST_CASE("tv distance") {
  const auto traj = random_trajectory(100, 3);
  const auto e = vds::empirical_distribution(traj, 4);
  CHECK(vds::tv_distance(e, e) == 0.0);

  vds::PartitionMasses a{2, 2, {1, 0, 0, 0}};
  vds::PartitionMasses b{2, 2, {0, 1, 0, 0}};
  CHECK(vds::tv_distance(a, b) == 1.0);

  vds::PartitionMasses c{2, 3, std::vector<double>(9, 1.0 / 9)};
  CHECK_THROWS_AS(vds::tv_distance(a, c), vds::Error);
}

TEST_CASE("partition masses of a density grid") {
  const auto uni = vds::partition_masses(vds::DensityGrid::uniform(2, 5), 4);
  for (double v : uni.masses) CHECK(v == doctest::Approx(1.0 / 16).epsilon(1e-14));

  // Resolution 3 against m = 2: brute-force overlap on a fine common lattice of 6.
  const auto g = vds::normalize(vds::DensityGrid(2, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9}));
  const auto pm = vds::partition_masses(g, 2);
  std::vector<double> expected(4, 0.0);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      expected[(i / 3) * 2 + (j / 3)] += g.value((i / 2) * 3 + (j / 2)) / 36.0;
    }
  }
  for (int k = 0; k < 4; ++k) CHECK(pm.masses[k] == doctest::Approx(expected[k]).epsilon(1e-13));
}

TEST_CASE("uniform target: 10^4 linked points give TV below 0.1 at m = 4") {
  const auto uni = vds::DensityGrid::uniform(2, 1);
  const auto target = vds::partition_masses(uni, 4);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ps = vds::draw_points(vds::tsp_adjusted_density(uni), 10000, seed);
    const auto traj = vds::parameterize(ps, vds::solve_heuristic(ps, {.seed = seed}));
    CHECK(vds::tv_distance(vds::empirical_distribution(traj, 4), target) < 0.1);
  }
}

TEST_CASE("adjusted drawing converges to the target, plain drawing does not") {
  const auto target = vds::radial_polynomial_density(2, 64, 2.0, 0.05);
  const auto reference = vds::partition_masses(target, 4);
  const auto adjusted = vds::tsp_adjusted_density(target);
  auto tv_for = [&](const vds::DensityGrid& drawing, std::size_t n, std::uint64_t seed) {
    const auto ps = vds::draw_points(drawing, n, seed);
    const auto traj = vds::parameterize(ps, vds::solve_heuristic(ps, {.seed = seed}));
    return vds::tv_distance(vds::empirical_distribution(traj, 4), reference);
  };
  int adjusted_wins = 0;
  std::vector<double> small, large;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    small.push_back(tv_for(adjusted, 100, seed));
    large.push_back(tv_for(adjusted, 5000, seed));
    if (large.back() < tv_for(target, 5000, seed)) ++adjusted_wins;
  }
  CHECK(oracle::median(large) < oracle::median(small));
  CHECK(adjusted_wins >= 3);
}
