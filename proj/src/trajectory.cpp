#include "vds/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vds/error.hpp"

namespace vds {

Trajectory::Trajectory(PointSet vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 2) throw Error(ErrorCode::DegeneratePath, "a trajectory needs at least two vertices");
  cumulative_.resize(n);
  cumulative_[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const auto a = vertices_.point(k - 1);
    const auto b = vertices_.point(k);
    double s = 0.0;
    for (int j = 0; j < vertices_.dim; ++j) s += (b[j] - a[j]) * (b[j] - a[j]);
    cumulative_[k] = cumulative_[k - 1] + std::sqrt(s);
  }
  if (!(cumulative_.back() > 0.0)) throw Error(ErrorCode::DegeneratePath, "all vertices coincide");
}

void Trajectory::evaluate_at_arc(double arc, std::span<double> out) const {
  arc = std::clamp(arc, 0.0, total_length());
  // First segment whose end reaches `arc`.
  auto it = std::lower_bound(cumulative_.begin() + 1, cumulative_.end(), arc);
  if (it == cumulative_.end()) --it;
  const std::size_t k = static_cast<std::size_t>(it - cumulative_.begin());
  const double seg = cumulative_[k] - cumulative_[k - 1];
  const double t = seg > 0.0 ? std::clamp((arc - cumulative_[k - 1]) / seg, 0.0, 1.0) : 0.0;
  const auto a = vertices_.point(k - 1);
  const auto b = vertices_.point(k);
  for (int j = 0; j < vertices_.dim; ++j) out[j] = t == 1.0 ? b[j] : a[j] + t * (b[j] - a[j]);
}

std::vector<double> Trajectory::evaluate(double s) const {
  std::vector<double> out(static_cast<std::size_t>(dim()));
  if (s <= 0.0) {
    const auto p = vertices_.point(0);
    std::copy(p.begin(), p.end(), out.begin());
  } else if (s >= 1.0) {
    const auto p = vertices_.point(vertices_.size() - 1);
    std::copy(p.begin(), p.end(), out.begin());
  } else {
    evaluate_at_arc(s * total_length(), out);
  }
  return out;
}

Trajectory parameterize(const PointSet& ps, const Tour& tour) {
  path_length(ps, tour.order);  // validates the permutation
  PointSet ordered;
  ordered.dim = ps.dim;
  ordered.seed = ps.seed;
  ordered.coords.reserve(ps.coords.size());
  for (std::size_t i : tour.order) ordered.push_back(ps.point(i));
  return Trajectory(std::move(ordered));
}

PointSet resample(const Trajectory& traj, double delta_t) {
  if (!(delta_t > 0.0) || !std::isfinite(delta_t)) {
    throw Error(ErrorCode::InvalidStep, "delta_t must be positive and finite");
  }
  const double total = traj.total_length();
  const auto count = static_cast<std::size_t>(std::floor(total / delta_t)) + 1;
  PointSet out;
  out.dim = traj.dim();
  out.seed = traj.vertices().seed;
  out.coords.resize(count * static_cast<std::size_t>(out.dim));
  const auto cum = traj.cumulative_lengths();
  const auto& v = traj.vertices();
  std::size_t seg = 1;
  for (std::size_t k = 0; k < count; ++k) {
    const double arc = std::min(static_cast<double>(k) * delta_t, total);
    while (seg + 1 < cum.size() && cum[seg] < arc) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double t = len > 0.0 ? std::clamp((arc - cum[seg - 1]) / len, 0.0, 1.0) : 0.0;
    const auto a = v.point(seg - 1);
    const auto b = v.point(seg);
    double* dst = out.coords.data() + k * static_cast<std::size_t>(out.dim);
    for (int j = 0; j < out.dim; ++j) dst[j] = t == 1.0 ? b[j] : a[j] + t * (b[j] - a[j]);
  }
  return out;
}

EmpiricalDistribution empirical_distribution(const Trajectory& traj, int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "partition resolution must be >= 1");
  const int d = traj.dim();
  EmpiricalDistribution out;
  out.dim = d;
  out.m = m;
  out.masses.assign(grid_cell_count(d, m), 0.0);

  const auto& v = traj.vertices();
  const auto cum = traj.cumulative_lengths();
  std::vector<double> cuts;
  std::vector<double> mid(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const double len = cum[k + 1] - cum[k];
    if (len == 0.0) continue;
    const auto a = v.point(k);
    const auto b = v.point(k + 1);
    cuts.assign({0.0, 1.0});
    for (int j = 0; j < d; ++j) {
      const double lo = std::min(a[j], b[j]) * m;
      const double hi = std::max(a[j], b[j]) * m;
      if (hi == lo) continue;
      for (double plane = std::floor(lo) + 1.0; plane < hi; plane += 1.0) {
        const double t = (plane - a[j] * m) / ((b[j] - a[j]) * m);
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t c = 1; c < cuts.size(); ++c) {
      const double piece = cuts[c] - cuts[c - 1];
      if (piece <= 0.0) continue;
      const double tm = 0.5 * (cuts[c] + cuts[c - 1]);
      std::size_t index = 0;
      for (int j = 0; j < d; ++j) {
        const double x = a[j] + tm * (b[j] - a[j]);
        index = index * static_cast<std::size_t>(m) + static_cast<std::size_t>(partition_index(x, m));
      }
      out.masses[index] += piece * len;
    }
  }
  const double total = traj.total_length();
  for (double& mass : out.masses) mass /= total;
  return out;
}

PartitionMasses partition_masses(const DensityGrid& g, int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "partition resolution must be >= 1");
  const int d = g.dim();
  const int r = g.resolution();
  // Per-axis overlap of fine interval [i/r, (i+1)/r) with coarse cells, in units of
  // the fine width; identical on every axis.
  std::vector<std::vector<std::pair<int, double>>> overlap(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    const double lo = static_cast<double>(i) / r;
    const double hi = static_cast<double>(i + 1) / r;
    const int first = partition_index(lo, m);
    const int last = std::min(m - 1, static_cast<int>(std::ceil(hi * m)) - 1);
    for (int c = first; c <= last; ++c) {
      const double clo = std::max(lo, static_cast<double>(c) / m);
      const double chi = std::min(hi, static_cast<double>(c + 1) / m);
      if (chi > clo) overlap[i].emplace_back(c, (chi - clo) * r);
    }
  }

  PartitionMasses out;
  out.dim = d;
  out.m = m;
  out.masses.assign(grid_cell_count(d, m), 0.0);
  const auto values = g.values();
  std::vector<int> cell(static_cast<std::size_t>(d));
  std::vector<std::size_t> choice(static_cast<std::size_t>(d));
  for (std::size_t index = 0; index < values.size(); ++index) {
    if (values[index] == 0.0) continue;
    std::size_t rest = index;
    for (int j = d - 1; j >= 0; --j) {
      cell[j] = static_cast<int>(rest % static_cast<std::size_t>(r));
      rest /= static_cast<std::size_t>(r);
    }
    const double mass = values[index] * g.cell_volume();
    std::fill(choice.begin(), choice.end(), 0);
    for (;;) {
      double weight = mass;
      std::size_t target = 0;
      for (int j = 0; j < d; ++j) {
        const auto& [c, w] = overlap[cell[j]][choice[j]];
        weight *= w;
        target = target * static_cast<std::size_t>(m) + static_cast<std::size_t>(c);
      }
      out.masses[target] += weight;
      int j = d - 1;
      while (j >= 0 && ++choice[j] == overlap[cell[j]].size()) choice[j--] = 0;
      if (j < 0) break;
    }
  }
  return out;
}

PartitionMasses coarsen(const PartitionMasses& fine, int factor) {
  if (factor < 1 || fine.m % factor != 0) {
    throw Error(ErrorCode::ResolutionMismatch, "coarsening factor must divide the resolution");
  }
  PartitionMasses out;
  out.dim = fine.dim;
  out.m = fine.m / factor;
  out.masses.assign(grid_cell_count(out.dim, out.m), 0.0);
  for (std::size_t index = 0; index < fine.masses.size(); ++index) {
    std::size_t rest = index;
    std::size_t target = 0;
    std::size_t stride = 1;
    for (int j = fine.dim - 1; j >= 0; --j) {
      const auto c = rest % static_cast<std::size_t>(fine.m);
      rest /= static_cast<std::size_t>(fine.m);
      target += (c / static_cast<std::size_t>(factor)) * stride;
      stride *= static_cast<std::size_t>(out.m);
    }
    out.masses[target] += fine.masses[index];
  }
  return out;
}

double tv_distance(const PartitionMasses& a, const PartitionMasses& b) {
  if (a.dim != b.dim || a.m != b.m || a.masses.size() != b.masses.size()) {
    throw Error(ErrorCode::ResolutionMismatch, "partitions differ in dimension or resolution");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.masses.size(); ++i) s += std::abs(a.masses[i] - b.masses[i]);
  return std::min(1.0, 0.5 * s);
}

PartitionMasses histogram_masses(const PointSet& ps, int m) {
  const auto counts = empirical_cell_histogram(ps, m);
  PartitionMasses out;
  out.dim = ps.dim;
  out.m = m;
  out.masses.resize(counts.size(), 0.0);
  const double n = static_cast<double>(ps.size());
  if (n > 0) {
    for (std::size_t i = 0; i < counts.size(); ++i) out.masses[i] = static_cast<double>(counts[i]) / n;
  }
  return out;
}

}  // namespace vds
