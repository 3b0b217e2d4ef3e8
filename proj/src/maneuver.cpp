#include "lanetrace/maneuver.hpp"

#include <cmath>

#include "lanetrace/errors.hpp"

namespace lanetrace {

std::string_view to_string(TurnManeuver m) {
  switch (m) {
    case TurnManeuver::GoingStraight: return "going_straight";
    case TurnManeuver::TurningLeft: return "turning_left";
    case TurnManeuver::TurningRight: return "turning_right";
    case TurnManeuver::Both: return "both";
  }
  return "going_straight";
}

std::string_view to_string(LaneChangeManeuver m) {
  switch (m) {
    case LaneChangeManeuver::FollowingLane: return "following_lane";
    case LaneChangeManeuver::ChangingLaneLeft: return "changing_lane_left";
    case LaneChangeManeuver::ChangingLaneRight: return "changing_lane_right";
    case LaneChangeManeuver::Both: return "both";
  }
  return "following_lane";
}

std::string_view display_name(TurnManeuver m) {
  switch (m) {
    case TurnManeuver::GoingStraight: return "Going straight";
    case TurnManeuver::TurningLeft: return "Turning left";
    case TurnManeuver::TurningRight: return "Turning right";
    case TurnManeuver::Both: return "Both";
  }
  return "Going straight";
}

std::string_view display_name(LaneChangeManeuver m) {
  switch (m) {
    case LaneChangeManeuver::FollowingLane: return "Following lane";
    case LaneChangeManeuver::ChangingLaneLeft: return "Changing lane left";
    case LaneChangeManeuver::ChangingLaneRight: return "Changing lane right";
    case LaneChangeManeuver::Both: return "Both";
  }
  return "Following lane";
}

std::optional<TurnManeuver> parse_turn_maneuver(std::string_view s) {
  for (auto m : {TurnManeuver::GoingStraight, TurnManeuver::TurningLeft, TurnManeuver::TurningRight,
                 TurnManeuver::Both}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::optional<LaneChangeManeuver> parse_lane_change_maneuver(std::string_view s) {
  for (auto m : {LaneChangeManeuver::FollowingLane, LaneChangeManeuver::ChangingLaneLeft,
                 LaneChangeManeuver::ChangingLaneRight, LaneChangeManeuver::Both}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

void TurnInferenceConfig::validate() const {
  if (!(curvature_min > 0.0)) throw ConfigError("curvature_min must be positive");
  if (!(orientation_min > 0.0)) throw ConfigError("orientation_min must be positive");
}

TurnDirection infer_turn_direction(const LaneSegment& segment, const TurnInferenceConfig& cfg) {
  if (segment_max_curvature(segment) <= cfg.curvature_min) return TurnDirection::None;
  const double change = segment_orientation_change(segment);
  const double bar = segment.predecessors.size() >= 2 ? cfg.orientation_min : 2.0 * cfg.orientation_min;
  if (change > bar) return TurnDirection::Left;
  if (change < -bar) return TurnDirection::Right;
  return TurnDirection::None;
}

TurnDirection effective_turn_direction(const LaneSegment& segment, const TurnInferenceConfig& cfg) {
  return segment.turn_direction ? *segment.turn_direction : infer_turn_direction(segment, cfg);
}

TurnManeuver derive_turn_maneuver(const LaneSequence& seq, const LaneGraph& graph,
                                  const TurnInferenceConfig& cfg) {
  bool left = false, right = false;
  for (const auto& interval : seq.segments) {
    switch (effective_turn_direction(graph.at(interval.segment), cfg)) {
      case TurnDirection::Left: left = true; break;
      case TurnDirection::Right: right = true; break;
      case TurnDirection::None: break;
    }
  }
  if (left && right) return TurnManeuver::Both;
  if (left) return TurnManeuver::TurningLeft;
  if (right) return TurnManeuver::TurningRight;
  return TurnManeuver::GoingStraight;
}

LaneChangeManeuver derive_lane_change_maneuver(const LaneSequence& seq) {
  bool left = false, right = false;
  for (const auto k : seq.transitions) {
    left |= k == ConnectivityKind::LeftNeighbor;
    right |= k == ConnectivityKind::RightNeighbor;
  }
  if (left && right) return LaneChangeManeuver::Both;
  if (left) return LaneChangeManeuver::ChangingLaneLeft;
  if (right) return LaneChangeManeuver::ChangingLaneRight;
  return LaneChangeManeuver::FollowingLane;
}

ManeuverLabel derive_label(const LaneSequence& seq, const LaneGraph& graph,
                           const TurnInferenceConfig& cfg) {
  return {derive_turn_maneuver(seq, graph, cfg), derive_lane_change_maneuver(seq), seq.confidence};
}

TurnManeuver mirrored(TurnManeuver m) {
  switch (m) {
    case TurnManeuver::TurningLeft: return TurnManeuver::TurningRight;
    case TurnManeuver::TurningRight: return TurnManeuver::TurningLeft;
    default: return m;
  }
}

LaneChangeManeuver mirrored(LaneChangeManeuver m) {
  switch (m) {
    case LaneChangeManeuver::ChangingLaneLeft: return LaneChangeManeuver::ChangingLaneRight;
    case LaneChangeManeuver::ChangingLaneRight: return LaneChangeManeuver::ChangingLaneLeft;
    default: return m;
  }
}

}  // namespace lanetrace
