#include "vds/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "vds/error.hpp"
#include "vds/rng.hpp"

namespace vds {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

/// Uniform bucket grid over the bounding box of a point set, roughly two points per cell.
class BucketGrid {
 public:
  explicit BucketGrid(const PointSet& ps) : dim_(ps.dim), lo_(ps.dim), scale_(ps.dim) {
    const std::size_t n = ps.size();
    std::vector<double> hi(static_cast<std::size_t>(dim_), -std::numeric_limits<double>::infinity());
    std::fill(lo_.begin(), lo_.end(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < n; ++k) {
      const auto p = ps.point(k);
      for (int j = 0; j < dim_; ++j) {
        lo_[j] = std::min(lo_[j], p[j]);
        hi[j] = std::max(hi[j], p[j]);
      }
    }
    const double target_cells = std::max(1.0, static_cast<double>(n) / 2.0);
    per_axis_ = std::max(1, static_cast<int>(std::floor(std::pow(target_cells, 1.0 / dim_))));
    min_width_ = std::numeric_limits<double>::infinity();
    for (int j = 0; j < dim_; ++j) {
      double extent = hi[j] - lo_[j];
      if (!(extent > 0.0)) extent = 1.0;
      scale_[j] = per_axis_ / extent;
      min_width_ = std::min(min_width_, extent / per_axis_);
    }
    std::size_t cells = 1;
    for (int j = 0; j < dim_; ++j) cells *= static_cast<std::size_t>(per_axis_);
    start_.assign(cells + 1, 0);
    cell_of_.resize(n);
    std::vector<int> coords(static_cast<std::size_t>(dim_));
    for (std::size_t k = 0; k < n; ++k) {
      cell_of_[k] = cell_index(ps.point(k));
      ++start_[cell_of_[k] + 1];
    }
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    members_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t k = 0; k < n; ++k) members_[fill[cell_of_[k]]++] = k;
  }

  int per_axis() const noexcept { return per_axis_; }
  double min_width() const noexcept { return min_width_; }
  std::size_t cell_count() const noexcept { return start_.size() - 1; }
  std::size_t cell_of(std::size_t point) const noexcept { return cell_of_[point]; }

  std::span<const std::size_t> bucket(std::size_t cell) const noexcept {
    return std::span<const std::size_t>(members_).subspan(start_[cell], start_[cell + 1] - start_[cell]);
  }

  std::vector<int> coords_of(std::size_t cell) const {
    std::vector<int> c(static_cast<std::size_t>(dim_));
    for (int j = dim_ - 1; j >= 0; --j) {
      c[j] = static_cast<int>(cell % static_cast<std::size_t>(per_axis_));
      cell /= static_cast<std::size_t>(per_axis_);
    }
    return c;
  }

  /// Calls f(cell) for every cell at Chebyshev distance exactly `ring` from `center`.
  template <class F>
  void for_each_in_ring(const std::vector<int>& center, int ring, F&& f) const {
    if (ring == 0) {
      f(flatten(center));
      return;
    }
    std::vector<int> cur(center.size());
    visit_ring(center, ring, 0, false, cur, f);
  }

 private:
  std::size_t cell_index(std::span<const double> p) const {
    std::size_t index = 0;
    for (int j = 0; j < dim_; ++j) {
      int c = static_cast<int>(std::floor((p[j] - lo_[j]) * scale_[j]));
      c = std::clamp(c, 0, per_axis_ - 1);
      index = index * static_cast<std::size_t>(per_axis_) + static_cast<std::size_t>(c);
    }
    return index;
  }

  std::size_t flatten(const std::vector<int>& c) const noexcept {
    std::size_t index = 0;
    for (int v : c) index = index * static_cast<std::size_t>(per_axis_) + static_cast<std::size_t>(v);
    return index;
  }

  template <class F>
  void visit_ring(const std::vector<int>& center, int ring, int axis, bool on_shell,
                  std::vector<int>& cur, F& f) const {
    const int c = center[axis];
    const bool last = axis + 1 == dim_;
    auto recurse = [&](int v, bool shell) {
      if (v < 0 || v >= per_axis_) return;
      cur[axis] = v;
      if (last) {
        f(flatten(cur));
      } else {
        visit_ring(center, ring, axis + 1, shell, cur, f);
      }
    };
    if (last && !on_shell) {
      recurse(c - ring, true);
      recurse(c + ring, true);
      return;
    }
    for (int v = std::max(0, c - ring); v <= std::min(per_axis_ - 1, c + ring); ++v) {
      recurse(v, on_shell || v == c - ring || v == c + ring);
    }
  }

  int dim_;
  int per_axis_ = 1;
  double min_width_ = 1.0;
  std::vector<double> lo_;
  std::vector<double> scale_;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> members_;
  std::vector<std::size_t> cell_of_;
};

std::size_t closest_to_centroid(const PointSet& ps) {
  const std::size_t n = ps.size();
  std::vector<double> centroid(static_cast<std::size_t>(ps.dim), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto p = ps.point(k);
    for (int j = 0; j < ps.dim; ++j) centroid[j] += p[j];
  }
  for (double& c : centroid) c /= static_cast<double>(n);
  std::size_t start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double d2 = squared_distance(ps.point(k), centroid);
    if (d2 < best) {
      best = d2;
      start = k;
    }
  }
  return start;
}

std::vector<std::size_t> nearest_neighbor_construction(const PointSet& ps, const BucketGrid& grid,
                                                       std::size_t start) {
  const std::size_t n = ps.size();
  std::vector<std::size_t> order;
  order.reserve(n);

  // Mutable copies of the buckets; visited points are swap-removed.
  std::vector<std::vector<std::size_t>> alive(grid.cell_count());
  std::vector<std::size_t> slot(n);
  for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
    const auto b = grid.bucket(cell);
    alive[cell].assign(b.begin(), b.end());
    for (std::size_t s = 0; s < alive[cell].size(); ++s) slot[alive[cell][s]] = s;
  }
  auto remove = [&](std::size_t point) {
    auto& bucket = alive[grid.cell_of(point)];
    const std::size_t s = slot[point];
    bucket[s] = bucket.back();
    slot[bucket[s]] = s;
    bucket.pop_back();
  };

  std::size_t current = start;
  remove(current);
  order.push_back(current);
  const double w = grid.min_width();
  while (order.size() < n) {
    const auto here = ps.point(current);
    const auto center = grid.coords_of(grid.cell_of(current));
    std::size_t next = n;
    double next_d2 = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring < grid.per_axis(); ++ring) {
      grid.for_each_in_ring(center, ring, [&](std::size_t cell) {
        for (std::size_t q : alive[cell]) {
          const double d2 = squared_distance(here, ps.point(q));
          if (d2 < next_d2 || (d2 == next_d2 && q < next)) {
            next_d2 = d2;
            next = q;
          }
        }
      });
      const double reach = ring * w;
      if (next < n && next_d2 <= reach * reach) break;
    }
    remove(next);
    order.push_back(next);
    current = next;
  }
  return order;
}

/// 2-opt on the open path, represented as a closed tour through an extra node that
/// is at distance zero from every point. Edges touching that node are the path ends.
class TwoOpt {
 public:
  TwoOpt(const PointSet& ps, const std::vector<std::size_t>& path,
         const std::vector<std::vector<std::size_t>>& neighbors)
      : ps_(ps), n_(path.size()), size_(path.size() + 1), neighbors_(neighbors) {
    tour_ = path;
    tour_.push_back(n_);
    pos_.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) pos_[tour_[i]] = i;
  }

  /// One sweep over `visit_order`; returns the number of applied moves.
  std::size_t pass(const std::vector<std::size_t>& visit_order) {
    std::size_t moves = 0;
    for (std::size_t a : visit_order) {
      if (try_node(a)) ++moves;
    }
    return moves;
  }

  std::vector<std::size_t> path() const {
    std::vector<std::size_t> out;
    out.reserve(n_);
    const std::size_t dummy_pos = pos_[n_];
    for (std::size_t i = 1; i < size_; ++i) out.push_back(tour_[(dummy_pos + i) % size_]);
    return out;
  }

 private:
  double dist(std::size_t a, std::size_t b) const {
    if (a == n_ || b == n_) return 0.0;
    return std::sqrt(squared_distance(ps_.point(a), ps_.point(b)));
  }
  std::size_t succ(std::size_t a) const { return tour_[(pos_[a] + 1) % size_]; }
  std::size_t pred(std::size_t a) const { return tour_[(pos_[a] + size_ - 1) % size_]; }

  static bool improves(double gain, double removed) {
    return gain > 1e-12 * removed;
  }

  bool try_node(std::size_t a) {
    // Successor direction: replace (a,b),(c,d) by (a,c),(b,d); reverse b..c.
    {
      const std::size_t b = succ(a);
      const double ab = dist(a, b);
      for (std::size_t c : neighbors_[a]) {
        const double ac = dist(a, c);
        if (ac >= ab) break;
        if (c == b) continue;
        const std::size_t d = succ(c);
        if (d == a) continue;
        const double removed = ab + dist(c, d);
        if (improves(removed - ac - dist(b, d), removed)) {
          reverse(pos_[b], pos_[c]);
          return true;
        }
      }
    }
    // Predecessor direction: replace (b,a),(d,c) by (c,a),(d,b); reverse a..d.
    {
      const std::size_t b = pred(a);
      const double ab = dist(a, b);
      for (std::size_t c : neighbors_[a]) {
        const double ac = dist(a, c);
        if (ac >= ab) break;
        if (c == b) continue;
        const std::size_t d = pred(c);
        if (d == a) continue;
        const double removed = ab + dist(c, d);
        if (improves(removed - ac - dist(b, d), removed)) {
          reverse(pos_[a], pos_[d]);
          return true;
        }
      }
    }
    return false;
  }

  /// Reverses the cyclic segment from position i forward to position j, or the
  /// complementary segment when that is shorter (same undirected cycle).
  void reverse(std::size_t i, std::size_t j) {
    std::size_t len = (j + size_ - i) % size_ + 1;
    if (2 * len > size_) {
      const std::size_t ni = (j + 1) % size_;
      const std::size_t nj = (i + size_ - 1) % size_;
      i = ni;
      j = nj;
      len = size_ - len;
    }
    for (std::size_t s = 0; s < len / 2; ++s) {
      const std::size_t u = tour_[i];
      const std::size_t v = tour_[j];
      tour_[i] = v;
      pos_[v] = i;
      tour_[j] = u;
      pos_[u] = j;
      i = (i + 1) % size_;
      j = (j + size_ - 1) % size_;
    }
  }

  const PointSet& ps_;
  std::size_t n_;
  std::size_t size_;
  const std::vector<std::vector<std::size_t>>& neighbors_;
  std::vector<std::size_t> tour_;
  std::vector<std::size_t> pos_;
};

}  // namespace

std::string_view to_string(TourMethod method) noexcept {
  return method == TourMethod::exact ? "exact" : "heuristic";
}

double path_length(const PointSet& ps, std::span<const std::size_t> order) {
  const std::size_t n = ps.size();
  if (order.size() != n) throw Error(ErrorCode::InvalidPermutation, "order size differs from point count");
  std::vector<bool> seen(n, false);
  for (std::size_t i : order) {
    if (i >= n || seen[i]) throw Error(ErrorCode::InvalidPermutation, "order is not a permutation");
    seen[i] = true;
  }
  double length = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) {
    length += std::sqrt(squared_distance(ps.point(order[k - 1]), ps.point(order[k])));
  }
  return length;
}

Tour solve_exact(const PointSet& ps) {
  const std::size_t n = ps.size();
  if (n > kMaxExactPoints) {
    throw Error(ErrorCode::TooManyPointsForExact,
                std::to_string(n) + " points exceeds the exact cap of " + std::to_string(kMaxExactPoints));
  }
  Tour tour;
  tour.method = TourMethod::exact;
  if (n <= 1) {
    tour.order.resize(n);
    std::iota(tour.order.begin(), tour.order.end(), std::size_t{0});
    return tour;
  }

  std::vector<double> d(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) d[a * n + b] = std::sqrt(squared_distance(ps.point(a), ps.point(b)));

  // best[S][j]: shortest path that starts at j and visits exactly the set S (j in S).
  const std::size_t full = (std::size_t{1} << n) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best((full + 1) * n, inf);
  for (std::size_t j = 0; j < n; ++j) best[(std::size_t{1} << j) * n + j] = 0.0;
  for (std::size_t set = 1; set <= full; ++set) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(set >> j & 1) || set == (std::size_t{1} << j)) continue;
      const std::size_t rest = set & ~(std::size_t{1} << j);
      double value = inf;
      for (std::size_t k = 0; k < n; ++k) {
        if (rest >> k & 1) value = std::min(value, d[j * n + k] + best[rest * n + k]);
      }
      best[set * n + j] = value;
    }
  }

  double optimum = inf;
  for (std::size_t j = 0; j < n; ++j) optimum = std::min(optimum, best[full * n + j]);
  const double tol = 1e-12 * (1.0 + optimum);

  // Greedy reconstruction picking the smallest feasible index at every step.
  std::size_t set = full;
  std::size_t current = 0;
  while (best[full * n + current] > optimum + tol) ++current;
  tour.order.push_back(current);
  while (tour.order.size() < n) {
    const std::size_t rest = set & ~(std::size_t{1} << current);
    const double goal = best[set * n + current];
    std::size_t next = 0;
    while (!(rest >> next & 1) || d[current * n + next] + best[rest * n + next] > goal + tol) ++next;
    tour.order.push_back(next);
    set = rest;
    current = next;
  }
  tour.length = path_length(ps, tour.order);
  return tour;
}

std::vector<std::vector<std::size_t>> nearest_neighbor_lists(const PointSet& ps, std::size_t k) {
  const std::size_t n = ps.size();
  std::vector<std::vector<std::size_t>> lists(n);
  if (n <= 1 || k == 0) return lists;
  k = std::min(k, n - 1);
  const BucketGrid grid(ps);
  const double w = grid.min_width();
  using Entry = std::pair<double, std::size_t>;
  for (std::size_t a = 0; a < n; ++a) {
    const auto here = ps.point(a);
    const auto center = grid.coords_of(grid.cell_of(a));
    std::priority_queue<Entry> heap;
    for (int ring = 0; ring < grid.per_axis(); ++ring) {
      grid.for_each_in_ring(center, ring, [&](std::size_t cell) {
        for (std::size_t q : grid.bucket(cell)) {
          if (q == a) continue;
          const Entry e{squared_distance(here, ps.point(q)), q};
          if (heap.size() < k) {
            heap.push(e);
          } else if (e < heap.top()) {
            heap.pop();
            heap.push(e);
          }
        }
      });
      const double reach = ring * w;
      if (heap.size() == k && heap.top().first <= reach * reach) break;
    }
    auto& list = lists[a];
    list.resize(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
      list[i] = heap.top().second;
      heap.pop();
    }
  }
  return lists;
}

std::size_t heuristic_start_count(std::size_t n, const HeuristicConfig& config) noexcept {
  if (n == 0) return 0;
  const std::size_t wanted =
      config.starts > 0 ? static_cast<std::size_t>(config.starts) : std::max<std::size_t>(1, 256 / n);
  return std::min(wanted, n);
}

Tour solve_heuristic(const PointSet& ps, const HeuristicConfig& config, HeuristicTrace* trace) {
  if (config.neighbor_list_size < 1) throw Error(ErrorCode::ConfigError, "neighbor_list_size must be >= 1");
  if (config.two_opt_max_passes < 0) throw Error(ErrorCode::ConfigError, "two_opt_max_passes must be >= 0");
  if (config.starts < 0) throw Error(ErrorCode::ConfigError, "starts must be >= 0");
  Tour tour;
  tour.method = TourMethod::heuristic;
  const std::size_t n = ps.size();
  if (n <= 1) {
    tour.order.resize(n);
    std::iota(tour.order.begin(), tour.order.end(), std::size_t{0});
    if (trace) *trace = HeuristicTrace{};
    return tour;
  }

  Rng rng(config.seed);
  std::vector<std::size_t> visit(n);
  std::iota(visit.begin(), visit.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(visit[i], visit[rng.below(i + 1)]);

  // Start candidates: centroid-closest first, then the rest in a seeded order.
  const std::size_t first = closest_to_centroid(ps);
  std::vector<std::size_t> starts{first};
  const std::size_t start_count = heuristic_start_count(n, config);
  if (start_count > 1) {
    std::vector<std::size_t> others;
    others.reserve(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      if (k != first) others.push_back(k);
    }
    for (std::size_t i = 0; i + 1 < start_count; ++i) {
      std::swap(others[i], others[i + rng.below(others.size() - i)]);
      starts.push_back(others[i]);
    }
  }

  const BucketGrid grid(ps);
  const auto neighbors = nearest_neighbor_lists(ps, static_cast<std::size_t>(config.neighbor_list_size));
  double best = std::numeric_limits<double>::infinity();
  HeuristicTrace local;
  for (std::size_t start : starts) {
    const std::vector<std::size_t> path = nearest_neighbor_construction(ps, grid, start);
    local.start = start;
    local.construction_length = path_length(ps, path);
    local.pass_lengths.clear();
    local.moves = 0;

    TwoOpt opt(ps, path, neighbors);
    for (int p = 0; p < config.two_opt_max_passes; ++p) {
      const std::size_t moves = opt.pass(visit);
      if (moves == 0) break;
      local.moves += moves;
      if (trace) local.pass_lengths.push_back(path_length(ps, opt.path()));
    }
    auto order = opt.path();
    const double length = path_length(ps, order);
    if (length < best) {
      best = length;
      tour.order = std::move(order);
      tour.length = length;
      if (trace) *trace = local;
    }
  }
  return tour;
}

}  // namespace vds
