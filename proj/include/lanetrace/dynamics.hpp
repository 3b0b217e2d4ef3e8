#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lanetrace/lane_graph.hpp"
#include "lanetrace/matching.hpp"
#include "lanetrace/sequence.hpp"

namespace lanetrace {

struct DynamicsSummary {
  std::string agent_id;
  double avg_velocity = 0.0;      // m/s
  double avg_acceleration = 0.0;  // m/s^2, signed
  std::optional<double> max_driven_curvature;  // 1/m, absent without a lane sequence
};

/// Mean finite-difference speed. Throws UndefinedQuantityError for < 2 positions.
double average_velocity(const Trajectory& traj);

/// Mean signed change of finite-difference speed per second.
/// Throws UndefinedQuantityError for < 3 positions.
double average_acceleration(const Trajectory& traj);

double max_driven_curvature(const LaneSequence& seq, const LaneGraph& graph);

/// Half-open bins [e_i, e_i+1) with the last bin closed on the right.
struct BinEdges {
  std::vector<double> edges;

  /// Throws ConfigError unless there are >= 2 strictly increasing finite edges.
  explicit BinEdges(std::vector<double> e);
  BinEdges() = default;

  std::size_t bin_count() const { return edges.empty() ? 0 : edges.size() - 1; }
  // Bin index, or nullopt when out of range (including NaN).
  std::optional<std::size_t> bin_of(double v) const;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t underflow = 0;
  std::size_t overflow = 0;

  std::size_t total() const;
  // Element-wise sum; edges must match.
  void merge(const Histogram& other);
};

Histogram build_histogram(std::span<const double> samples, const BinEdges& edges);
Histogram build_histogram(std::span<const double> samples, std::span<const double> edges);

namespace default_bins {
BinEdges velocity();      // {0, 4, 8, 12, 16, 20} m/s
BinEdges acceleration();  // {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5} m/s^2
BinEdges curvature();     // {0, 5, 10, 15, 20, 25} * 1e-2 1/m
}  // namespace default_bins

}  // namespace lanetrace
