#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lanetrace/lane_graph.hpp"
#include "lanetrace/matching.hpp"

namespace lanetrace {

struct LaneSequence {
  std::vector<AssignmentInterval> segments;
  // transitions[i] links segments[i] to segments[i + 1]; never Unconnected.
  std::vector<ConnectivityKind> transitions;
  double confidence = 0.0;

  std::size_t lane_change_count() const;
  std::vector<SegmentId> segment_ids() const;

  friend bool operator==(const LaneSequence&, const LaneSequence&) = default;
};

enum class EnumerationStatus { Complete, NoRoot, GuardTripped };

struct EnumerationResult {
  EnumerationStatus status = EnumerationStatus::Complete;
  // In DFS discovery order. Partial when the guard tripped.
  std::vector<LaneSequence> sequences;
};

inline constexpr std::size_t kDefaultSequenceLimit = 10'000;

/// Depth-first search over the interval graph. Roots are intervals covering
/// timestep 0, and every path reaching an interval that covers T - 1 is
/// recorded (the search continues past it). An edge i -> j exists when the
/// segments are connected and start(i) <= start(j) <= end(i) + 1.
/// Confidence is left at 0; see score_sequences().
EnumerationResult enumerate_sequences(std::span<const AssignmentInterval> intervals,
                                      const LaneGraph& graph, Timestep timestep_count,
                                      std::size_t limit = kDefaultSequenceLimit);

/// Mean over all timesteps of the best confidence among the sequence
/// segments covering that timestep; uncovered timesteps count as 0.
double maneuver_confidence(const LaneSequence& seq, std::span<const TimestepAssignment> assignments);

void score_sequences(std::span<LaneSequence> sequences,
                     std::span<const TimestepAssignment> assignments);

/// Highest confidence; ties go to fewer lane changes, then fewer segments,
/// then lexicographically smaller segment-id list.
std::optional<LaneSequence> select_best(std::span<const LaneSequence> sequences);

}  // namespace lanetrace
