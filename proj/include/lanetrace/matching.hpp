#pragma once

#include <span>
#include <string>
#include <vector>

#include "lanetrace/geometry.hpp"
#include "lanetrace/lane_graph.hpp"

namespace lanetrace {

using Timestep = int;

struct Trajectory {
  std::string agent_id;
  double sample_rate = 10.0;  // Hz
  std::vector<Point2> positions;
  // Scene-level index of positions[0]; matching always works in local indices.
  Timestep first_timestep = 0;
};

struct AssignmentEntry {
  SegmentId segment;
  double confidence;

  friend bool operator==(const AssignmentEntry&, const AssignmentEntry&) = default;
};

/// Lane assignments of one timestep. Only entries above the confidence
/// threshold are stored, sorted by segment id; a timestep may have none.
struct TimestepAssignment {
  Timestep timestep;
  std::vector<AssignmentEntry> entries;

  friend bool operator==(const TimestepAssignment&, const TimestepAssignment&) = default;
};

struct AssignmentInterval {
  SegmentId segment;
  Timestep start;  // inclusive
  Timestep end;    // inclusive

  bool contains(Timestep t) const { return start <= t && t <= end; }
  friend bool operator==(const AssignmentInterval&, const AssignmentInterval&) = default;
};

struct MatchConfig {
  double d_th = 5.0;
  double p_th = 0.5;
  // Defaults to d_th when unset (<= 0).
  double search_radius = 0.0;

  double effective_search_radius() const { return search_radius > 0.0 ? search_radius : d_th; }
  // Throws ConfigError unless d_th > 0 and 0 <= p_th < 1.
  void validate() const;
};

/// max(0, 1 - d / d_th). Throws ConfigError for d_th <= 0.
double assignment_confidence(double d, double d_th);

/// One record per trajectory position, in order. An entry survives when its
/// confidence is strictly greater than p_th.
std::vector<TimestepAssignment> assign_timesteps(const Trajectory& traj, const LaneGraph& graph,
                                                 const MatchConfig& cfg);

/// One interval per maximal run of consecutive timesteps per segment, sorted
/// by (start, segment id).
std::vector<AssignmentInterval> build_intervals(std::span<const TimestepAssignment> assignments);

}  // namespace lanetrace
