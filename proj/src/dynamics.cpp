#include "lanetrace/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lanetrace/errors.hpp"

namespace lanetrace {

namespace {

std::vector<double> step_speeds(const Trajectory& traj) {
  std::vector<double> speeds;
  speeds.reserve(traj.positions.size());
  for (std::size_t t = 0; t + 1 < traj.positions.size(); ++t) {
    speeds.push_back(distance(traj.positions[t + 1], traj.positions[t]) * traj.sample_rate);
  }
  return speeds;
}

}  // namespace

double average_velocity(const Trajectory& traj) {
  if (traj.positions.size() < 2) {
    throw UndefinedQuantityError("average velocity needs at least 2 positions");
  }
  const auto speeds = step_speeds(traj);
  return std::accumulate(speeds.begin(), speeds.end(), 0.0) / static_cast<double>(speeds.size());
}

double average_acceleration(const Trajectory& traj) {
  if (traj.positions.size() < 3) {
    throw UndefinedQuantityError("average acceleration needs at least 3 positions");
  }
  const auto speeds = step_speeds(traj);
  double sum = 0.0;
  for (std::size_t t = 0; t + 1 < speeds.size(); ++t) {
    sum += (speeds[t + 1] - speeds[t]) * traj.sample_rate;
  }
  return sum / static_cast<double>(speeds.size() - 1);
}

double max_driven_curvature(const LaneSequence& seq, const LaneGraph& graph) {
  double best = 0.0;
  for (const auto& interval : seq.segments) {
    best = std::max(best, segment_max_curvature(graph.at(interval.segment)));
  }
  return best;
}

BinEdges::BinEdges(std::vector<double> e) : edges(std::move(e)) {
  if (edges.size() < 2) throw ConfigError("bin edges need at least 2 values");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) throw ConfigError("bin edges must be finite");
    if (i > 0 && !(edges[i] > edges[i - 1])) {
      throw ConfigError("bin edges must be strictly increasing");
    }
  }
}

std::optional<std::size_t> BinEdges::bin_of(double v) const {
  if (edges.size() < 2 || !(v >= edges.front()) || !(v <= edges.back())) return std::nullopt;
  if (v == edges.back()) return edges.size() - 2;
  const auto it = std::upper_bound(edges.begin(), edges.end(), v);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0}) + underflow + overflow;
}

void Histogram::merge(const Histogram& other) {
  if (edges != other.edges) throw ConfigError("cannot merge histograms with different edges");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  underflow += other.underflow;
  overflow += other.overflow;
}

Histogram build_histogram(std::span<const double> samples, const BinEdges& edges) {
  Histogram h{edges.edges, std::vector<std::size_t>(edges.bin_count(), 0), 0, 0};
  for (const double v : samples) {
    if (const auto bin = edges.bin_of(v)) {
      ++h.counts[*bin];
    } else if (v < edges.edges.front()) {
      ++h.underflow;
    } else {
      // Above the last edge, or NaN.
      ++h.overflow;
    }
  }
  return h;
}

Histogram build_histogram(std::span<const double> samples, std::span<const double> edges) {
  return build_histogram(samples, BinEdges(std::vector<double>(edges.begin(), edges.end())));
}

namespace default_bins {
BinEdges velocity() { return BinEdges({0.0, 4.0, 8.0, 12.0, 16.0, 20.0}); }
BinEdges acceleration() { return BinEdges({-2.5, -1.5, -0.5, 0.5, 1.5, 2.5}); }
BinEdges curvature() { return BinEdges({0.0, 0.05, 0.10, 0.15, 0.20, 0.25}); }
}  // namespace default_bins

}  // namespace lanetrace
