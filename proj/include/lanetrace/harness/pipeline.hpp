#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "lanetrace/dynamics.hpp"
#include "lanetrace/harness/config.hpp"
#include "lanetrace/lane_graph.hpp"
#include "lanetrace/maneuver.hpp"
#include "lanetrace/matching.hpp"
#include "lanetrace/sequence.hpp"

namespace lanetrace {

enum class ExtractionStatus { Ok, NoRootAssignment, NoPath, PathExplosion };

std::string_view to_string(ExtractionStatus s);

struct Extraction {
  ExtractionStatus status = ExtractionStatus::NoRootAssignment;
  std::optional<LaneSequence> sequence;
  std::optional<ManeuverLabel> label;
  std::size_t candidate_count = 0;
};

/// Assignment, intervals, sequence search, scoring, selection and labelling
/// for one trajectory.
Extraction extract_maneuver(const Trajectory& traj, const LaneGraph& graph, const Config& cfg);

/// Dynamics of a trajectory; curvature is taken from the extracted sequence when present.
DynamicsSummary summarize_dynamics(const Trajectory& traj, const LaneGraph& graph,
                                   const Extraction& extraction);

}  // namespace lanetrace
