#include "lanetrace/harness/pipeline.hpp"

#include <cmath>
#include <limits>

#include "lanetrace/errors.hpp"

namespace lanetrace {

std::string_view to_string(ExtractionStatus s) {
  switch (s) {
    case ExtractionStatus::Ok: return "ok";
    case ExtractionStatus::NoRootAssignment: return "no_root_assignment";
    case ExtractionStatus::NoPath: return "no_path";
    case ExtractionStatus::PathExplosion: return "path_explosion";
  }
  return "ok";
}

Extraction extract_maneuver(const Trajectory& traj, const LaneGraph& graph, const Config& cfg) {
  const auto assignments = assign_timesteps(traj, graph, cfg.match);
  const auto intervals = build_intervals(assignments);
  auto found = enumerate_sequences(intervals, graph, static_cast<Timestep>(assignments.size()),
                                   cfg.sequence_limit);

  Extraction out;
  out.candidate_count = found.sequences.size();
  switch (found.status) {
    case EnumerationStatus::NoRoot:
      out.status = ExtractionStatus::NoRootAssignment;
      return out;
    case EnumerationStatus::GuardTripped:
      out.status = ExtractionStatus::PathExplosion;
      return out;
    case EnumerationStatus::Complete:
      break;
  }
  if (found.sequences.empty()) {
    out.status = ExtractionStatus::NoPath;
    return out;
  }
  score_sequences(found.sequences, assignments);
  out.sequence = select_best(found.sequences);
  out.label = derive_label(*out.sequence, graph, cfg.turn);
  out.status = ExtractionStatus::Ok;
  return out;
}

DynamicsSummary summarize_dynamics(const Trajectory& traj, const LaneGraph& graph,
                                   const Extraction& extraction) {
  DynamicsSummary d;
  d.agent_id = traj.agent_id;
  d.avg_velocity = average_velocity(traj);
  d.avg_acceleration = traj.positions.size() >= 3 ? average_acceleration(traj)
                                                  : std::numeric_limits<double>::quiet_NaN();
  if (extraction.sequence) d.max_driven_curvature = max_driven_curvature(*extraction.sequence, graph);
  return d;
}

}  // namespace lanetrace
