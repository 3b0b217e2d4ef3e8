#pragma once

#include <string_view>

#include "lanetrace/lane_graph.hpp"
#include "lanetrace/sequence.hpp"

namespace lanetrace {

enum class TurnManeuver { GoingStraight, TurningLeft, TurningRight, Both };
enum class LaneChangeManeuver { FollowingLane, ChangingLaneLeft, ChangingLaneRight, Both };

std::string_view to_string(TurnManeuver m);
std::string_view to_string(LaneChangeManeuver m);
// Human-readable table labels ("Going straight", "Changing lane left", ...).
std::string_view display_name(TurnManeuver m);
std::string_view display_name(LaneChangeManeuver m);
std::optional<TurnManeuver> parse_turn_maneuver(std::string_view s);
std::optional<LaneChangeManeuver> parse_lane_change_maneuver(std::string_view s);

struct ManeuverLabel {
  TurnManeuver turn = TurnManeuver::GoingStraight;
  LaneChangeManeuver lane_change = LaneChangeManeuver::FollowingLane;
  double source_sequence_confidence = 0.0;
};

// Label equality ignores the confidence.
inline bool same_maneuvers(const ManeuverLabel& a, const ManeuverLabel& b) {
  return a.turn == b.turn && a.lane_change == b.lane_change;
}

struct TurnInferenceConfig {
  double curvature_min = 0.02;     // 1/m
  double orientation_min = 0.436;  // rad, about 25 degrees

  void validate() const;
};

/// Turn direction from centerline geometry for segments that lack the
/// attribute. Both geometric gates (|orientation change| and max curvature)
/// must pass; the orientation bar is orientation_min when the segment has two
/// or more predecessors, 2 * orientation_min otherwise.
TurnDirection infer_turn_direction(const LaneSegment& segment, const TurnInferenceConfig& cfg);

/// Stored attribute when present, inferred otherwise.
TurnDirection effective_turn_direction(const LaneSegment& segment, const TurnInferenceConfig& cfg);

TurnManeuver derive_turn_maneuver(const LaneSequence& seq, const LaneGraph& graph,
                                  const TurnInferenceConfig& cfg);

LaneChangeManeuver derive_lane_change_maneuver(const LaneSequence& seq);

ManeuverLabel derive_label(const LaneSequence& seq, const LaneGraph& graph,
                           const TurnInferenceConfig& cfg);

TurnManeuver mirrored(TurnManeuver m);
LaneChangeManeuver mirrored(LaneChangeManeuver m);

}  // namespace lanetrace
