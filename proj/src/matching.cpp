#include "lanetrace/matching.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lanetrace/errors.hpp"

namespace lanetrace {

void MatchConfig::validate() const {
  if (!(d_th > 0.0) || !std::isfinite(d_th)) throw ConfigError("d_th must be positive");
  if (!(p_th >= 0.0 && p_th < 1.0)) throw ConfigError("p_th must lie in [0, 1)");
  if (std::isnan(search_radius)) throw ConfigError("search radius must be a number");
}

double assignment_confidence(double d, double d_th) {
  if (!(d_th > 0.0)) throw ConfigError("d_th must be positive");
  return std::max(0.0, 1.0 - d / d_th);
}

std::vector<TimestepAssignment> assign_timesteps(const Trajectory& traj, const LaneGraph& graph,
                                                 const MatchConfig& cfg) {
  cfg.validate();
  const double radius = cfg.effective_search_radius();
  std::vector<TimestepAssignment> out;
  out.reserve(traj.positions.size());
  for (std::size_t t = 0; t < traj.positions.size(); ++t) {
    const Point2 p = traj.positions[t];
    TimestepAssignment rec{static_cast<Timestep>(t), {}};
    for (const LaneSegment* seg : graph.segments_within(p, radius)) {
      const double conf = assignment_confidence(point_to_centerline_distance(p, *seg), cfg.d_th);
      if (conf > cfg.p_th) rec.entries.push_back({seg->id, conf});
    }
    std::sort(rec.entries.begin(), rec.entries.end(),
              [](const auto& a, const auto& b) { return a.segment < b.segment; });
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AssignmentInterval> build_intervals(std::span<const TimestepAssignment> assignments) {
  // Open runs keyed by segment; closed when the segment is absent at a timestep.
  std::map<SegmentId, AssignmentInterval> open;
  std::vector<AssignmentInterval> out;

  for (const auto& rec : assignments) {
    for (auto it = open.begin(); it != open.end();) {
      const bool present = std::any_of(rec.entries.begin(), rec.entries.end(),
                                       [&](const auto& e) { return e.segment == it->first; });
      if (!present || it->second.end + 1 != rec.timestep) {
        out.push_back(it->second);
        it = open.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& e : rec.entries) {
      auto [it, inserted] = open.try_emplace(e.segment, AssignmentInterval{e.segment, rec.timestep, rec.timestep});
      if (!inserted) it->second.end = rec.timestep;
    }
  }
  for (auto& [_, interval] : open) out.push_back(interval);

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.segment != b.segment) return a.segment < b.segment;
    return a.end < b.end;
  });
  return out;
}

}  // namespace lanetrace
