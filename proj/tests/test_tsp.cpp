#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "vds/density.hpp"
#include "vds/error.hpp"
#include "vds/sampler.hpp"
#include "vds/tsp.hpp"

namespace {

vds::PointSet make_points(std::initializer_list<std::pair<double, double>> pts) {
  vds::PointSet ps;
  for (auto [x, y] : pts) {
    const double p[2] = {x, y};
    ps.push_back(p);
  }
  return ps;
}

std::vector<oracle::Pt> as_oracle(const vds::PointSet& ps) {
  std::vector<oracle::Pt> out;
  for (std::size_t k = 0; k < ps.size(); ++k) out.push_back({ps.point(k)[0], ps.point(k)[1]});
  return out;
}

bool is_permutation_of_n(const std::vector<std::size_t>& order, std::size_t n) {
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i) return false;
  }
  return sorted.size() == n;
}

vds::PointSet scaled(const vds::PointSet& ps, double s) {
  vds::PointSet out = ps;
  for (auto& c : out.coords) c *= s;
  return out;
}

}  // namespace

TEST_CASE("path_length sums consecutive distances") {
  const auto two = make_points({{0, 0}, {1, 1}});
  const std::size_t o2[] = {0, 1};
  CHECK(vds::path_length(two, o2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const auto square = make_points({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  const std::size_t o4[] = {0, 1, 2, 3};
  CHECK(vds::path_length(square, o4) == doctest::Approx(3.0).epsilon(1e-15));

  const auto ps = vds::draw_points(vds::DensityGrid::uniform(2, 1), 50, 5);
  std::vector<std::size_t> order(50);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937(1));
  std::vector<std::size_t> rev(order.rbegin(), order.rend());
  CHECK(vds::path_length(ps, order) == doctest::Approx(vds::path_length(ps, rev)).epsilon(1e-13));

  CHECK(vds::path_length(vds::PointSet{}, std::vector<std::size_t>{}) == 0.0);
}

TEST_CASE("path_length rejects non-permutations") {
  const auto ps = make_points({{0, 0}, {1, 1}, {0.5, 0.5}});
  const std::size_t dup[] = {0, 0, 1};
  const std::size_t short_order[] = {0, 1};
  const std::size_t out_of_range[] = {0, 1, 3};
  CHECK_THROWS_AS(vds::path_length(ps, dup), vds::Error);
  CHECK_THROWS_AS(vds::path_length(ps, short_order), vds::Error);
  CHECK_THROWS_AS(vds::path_length(ps, out_of_range), vds::Error);
}

TEST_CASE("exact solver on hand-checkable instances") {
  const auto square = make_points({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  const auto t = vds::solve_exact(square);
  CHECK(t.length == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(t.method == vds::TourMethod::exact);
  CHECK(t.order.front() < t.order.back());

  const auto line = make_points({{1, 0}, {0, 0}, {0.5, 0}});
  const auto l = vds::solve_exact(line);
  CHECK(l.length == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(l.order == std::vector<std::size_t>{0, 2, 1});

  CHECK(vds::solve_exact(vds::PointSet{}).length == 0.0);
  CHECK(vds::solve_exact(make_points({{0.3, 0.3}})).order == std::vector<std::size_t>{0});
}

TEST_CASE("exact solver matches brute force on 10 points") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto ps = vds::draw_points(vds::DensityGrid::uniform(2, 1), 10, seed);
    const auto t = vds::solve_exact(ps);
    CHECK(std::abs(t.length - oracle::brute_force_path(as_oracle(ps))) <= 1e-12);
    CHECK(is_permutation_of_n(t.order, 10));
    CHECK(std::abs(t.length - vds::path_length(ps, t.order)) <= 1e-9);
  }
}

TEST_CASE("exact solver refuses more than 12 points") {
  const auto ps = vds::draw_points(vds::DensityGrid::uniform(2, 1), 13, 1);
  try {
    vds::solve_exact(ps);
    FAIL("expected TooManyPointsForExact");
  } catch (const vds::Error& e) {
    CHECK(e.code() == vds::ErrorCode::TooManyPointsForExact);
  }
  CHECK_NOTHROW(vds::solve_exact(vds::draw_points(vds::DensityGrid::uniform(2, 1), 12, 1)));
}

TEST_CASE("heuristic equals exact for at most three points") {
  for (std::size_t n = 0; n <= 3; ++n) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto ps = vds::draw_points(vds::DensityGrid::uniform(2, 1), n, seed);
      CHECK(vds::solve_heuristic(ps).length == doctest::Approx(vds::solve_exact(ps).length).epsilon(1e-14));
    }
  }
}

TEST_CASE("heuristic stays within 15 percent of the optimum on 10 points") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ps = vds::draw_points(vds::DensityGrid::uniform(2, 1), 10, 1000 + seed);
    const double exact = vds::solve_exact(ps).length;
    const double heur = vds::solve_heuristic(ps, {.seed = seed}).length;
    CHECK(heur >= exact - 1e-12);
    CHECK(heur <= 1.15 * exact);
  }
}

TEST_CASE("heuristic output is feasible and 2-opt never lengthens the path") {
  const auto g = vds::radial_polynomial_density(2, 32, 2.0, 0.1);
  for (std::size_t n : {4u, 17u, 200u, 3000u}) {
    const auto ps = vds::draw_points(g, n, n);
    vds::HeuristicTrace trace;
    const auto t = vds::solve_heuristic(ps, {.starts = 1}, &trace);
    CHECK(is_permutation_of_n(t.order, n));
    CHECK(std::abs(t.length - vds::path_length(ps, t.order)) <= 1e-9);
    CHECK(t.length <= trace.construction_length + 1e-12);
    double previous = trace.construction_length;
    for (double len : trace.pass_lengths) {
      CHECK(len <= previous + 1e-12);
      previous = len;
    }
  }
}

TEST_CASE("heuristic is deterministic and works in three dimensions") {
  const auto ps = vds::draw_points(vds::DensityGrid::uniform(3, 2), 500, 9);
  const auto a = vds::solve_heuristic(ps, {.seed = 4});
  const auto b = vds::solve_heuristic(ps, {.seed = 4});
  CHECK(a.order == b.order);
  CHECK(a.length == b.length);
  CHECK(is_permutation_of_n(a.order, 500));
  CHECK(std::abs(a.length - vds::path_length(ps, a.order)) <= 1e-9);
}

TEST_CASE("lengths scale with the coordinates") {
  const auto ps = vds::draw_points(vds::DensityGrid::uniform(2, 1), 400, 21);
  const auto small = vds::draw_points(vds::DensityGrid::uniform(2, 1), 9, 21);
  // Multiplying by two is exact in binary floating point, so every decision repeats.
  CHECK(vds::solve_heuristic(scaled(ps, 2.0)).length == 2.0 * vds::solve_heuristic(ps).length);
  CHECK(vds::solve_exact(scaled(small, 2.0)).length == 2.0 * vds::solve_exact(small).length);
  const double h3 = vds::solve_heuristic(scaled(ps, 3.0)).length;
  CHECK(std::abs(h3 - 3.0 * vds::solve_heuristic(ps).length) <= 1e-9 * h3);
  const double e3 = vds::solve_exact(scaled(small, 3.0)).length;
  CHECK(std::abs(e3 - 3.0 * vds::solve_exact(small).length) <= 1e-9 * e3);
}

TEST_CASE("neighbour lists agree with brute force") {
  const auto ps = vds::draw_points(vds::radial_polynomial_density(2, 16, 2.0, 0.1), 300, 3);
  const auto lists = vds::nearest_neighbor_lists(ps, 8);
  const auto pts = as_oracle(ps);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) d.push_back(oracle::dist(pts[i], pts[j]));
    }
    std::sort(d.begin(), d.end());
    REQUIRE(lists[i].size() == 8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(oracle::dist(pts[i], pts[lists[i][k]]) == d[k]);
  }
}

TEST_CASE("length per sqrt(N) is stable between 1e5 and 4e5 points") {
  const auto uni = vds::DensityGrid::uniform(2, 1);
  const auto a = vds::draw_points(uni, 100000, 1);
  const auto b = vds::draw_points(uni, 400000, 2);
  const double ra = vds::solve_heuristic(a).length / std::sqrt(1e5);
  const double rb = vds::solve_heuristic(b).length / std::sqrt(4e5);
  CHECK(std::abs(ra - rb) <= 0.10 * rb);
}
