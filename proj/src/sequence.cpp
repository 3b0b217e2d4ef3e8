#include "lanetrace/sequence.hpp"

#include <algorithm>

namespace lanetrace {

std::size_t LaneSequence::lane_change_count() const {
  return static_cast<std::size_t>(std::count_if(transitions.begin(), transitions.end(), [](auto k) {
    return k == ConnectivityKind::LeftNeighbor || k == ConnectivityKind::RightNeighbor;
  }));
}

std::vector<SegmentId> LaneSequence::segment_ids() const {
  std::vector<SegmentId> ids;
  ids.reserve(segments.size());
  for (const auto& s : segments) ids.push_back(s.segment);
  return ids;
}

namespace {

struct Edge {
  std::size_t to;
  ConnectivityKind kind;
};

class SequenceSearch {
 public:
  SequenceSearch(std::span<const AssignmentInterval> intervals, const LaneGraph& graph,
                 Timestep last, std::size_t limit)
      : intervals_(intervals), last_(last), limit_(limit), adjacency_(intervals.size()),
        on_path_(intervals.size(), false) {
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      for (std::size_t j = 0; j < intervals.size(); ++j) {
        if (i == j) continue;
        const auto& a = intervals[i];
        const auto& b = intervals[j];
        if (b.start < a.start || b.start > a.end + 1) continue;
        const ConnectivityKind kind = connectivity(graph, a.segment, b.segment);
        if (kind != ConnectivityKind::Unconnected) adjacency_[i].push_back({j, kind});
      }
    }
  }

  EnumerationResult run() {
    EnumerationResult result;
    bool any_root = false;
    for (std::size_t i = 0; i < intervals_.size() && !tripped_; ++i) {
      if (!intervals_[i].contains(0)) continue;
      any_root = true;
      visit(i, result.sequences);
    }
    if (tripped_) {
      result.status = EnumerationStatus::GuardTripped;
    } else if (!any_root) {
      result.status = EnumerationStatus::NoRoot;
    }
    return result;
  }

 private:
  void visit(std::size_t node, std::vector<LaneSequence>& out) {
    on_path_[node] = true;
    path_.push_back(node);

    if (intervals_[node].contains(last_)) {
      if (out.size() >= limit_) {
        tripped_ = true;
      } else {
        LaneSequence seq;
        seq.segments.reserve(path_.size());
        for (const std::size_t n : path_) seq.segments.push_back(intervals_[n]);
        seq.transitions = kinds_;
        out.push_back(std::move(seq));
      }
    }

    for (const Edge& e : adjacency_[node]) {
      if (tripped_) break;
      if (on_path_[e.to]) continue;
      kinds_.push_back(e.kind);
      visit(e.to, out);
      kinds_.pop_back();
    }

    path_.pop_back();
    on_path_[node] = false;
  }

  std::span<const AssignmentInterval> intervals_;
  Timestep last_;
  std::size_t limit_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<bool> on_path_;
  std::vector<std::size_t> path_;
  std::vector<ConnectivityKind> kinds_;
  bool tripped_ = false;
};

}  // namespace

EnumerationResult enumerate_sequences(std::span<const AssignmentInterval> intervals,
                                      const LaneGraph& graph, Timestep timestep_count,
                                      std::size_t limit) {
  if (timestep_count < 1) return {EnumerationStatus::NoRoot, {}};
  return SequenceSearch(intervals, graph, timestep_count - 1, limit).run();
}

double maneuver_confidence(const LaneSequence& seq, std::span<const TimestepAssignment> assignments) {
  if (assignments.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& rec : assignments) {
    double best = 0.0;
    for (const auto& interval : seq.segments) {
      if (!interval.contains(rec.timestep)) continue;
      for (const auto& e : rec.entries) {
        if (e.segment == interval.segment) best = std::max(best, e.confidence);
      }
    }
    sum += best;
  }
  return sum / static_cast<double>(assignments.size());
}

void score_sequences(std::span<LaneSequence> sequences,
                     std::span<const TimestepAssignment> assignments) {
  for (auto& s : sequences) s.confidence = maneuver_confidence(s, assignments);
}

std::optional<LaneSequence> select_best(std::span<const LaneSequence> sequences) {
  if (sequences.empty()) return std::nullopt;
  auto better = [](const LaneSequence& a, const LaneSequence& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    const auto ca = a.lane_change_count(), cb = b.lane_change_count();
    if (ca != cb) return ca < cb;
    if (a.segments.size() != b.segments.size()) return a.segments.size() < b.segments.size();
    return a.segment_ids() < b.segment_ids();
  };
  const LaneSequence* best = &sequences.front();
  for (const auto& s : sequences.subspan(1)) {
    if (better(s, *best)) best = &s;
  }
  return *best;
}

}  // namespace lanetrace
