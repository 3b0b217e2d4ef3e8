#include "lanetrace/lane_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "lanetrace/errors.hpp"

namespace lanetrace {

std::string_view to_string(TurnDirection d) {
  switch (d) {
    case TurnDirection::None: return "none";
    case TurnDirection::Left: return "left";
    case TurnDirection::Right: return "right";
  }
  return "none";
}

std::string_view to_string(ConnectivityKind k) {
  switch (k) {
    case ConnectivityKind::Successor: return "successor";
    case ConnectivityKind::LeftNeighbor: return "left_neighbor";
    case ConnectivityKind::RightNeighbor: return "right_neighbor";
    case ConnectivityKind::Unconnected: return "unconnected";
  }
  return "unconnected";
}

std::optional<TurnDirection> parse_turn_direction(std::string_view s) {
  if (s == "none") return TurnDirection::None;
  if (s == "left") return TurnDirection::Left;
  if (s == "right") return TurnDirection::Right;
  return std::nullopt;
}

std::string_view to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::DuplicateId: return "duplicate_id";
    case Violation::Kind::DanglingId: return "dangling_id";
    case Violation::Kind::AsymmetricLink: return "asymmetric_link";
    case Violation::Kind::DegenerateCenterline: return "degenerate_centerline";
  }
  return "unknown";
}

namespace {

BoundingBox bounding_box(std::span<const Point2> pts) {
  BoundingBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (const auto& p : pts) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

bool contains_id(const std::vector<SegmentId>& ids, std::string_view id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

// Bound on cells visited per query before falling back to a linear scan.
constexpr long long kMaxCellsPerQuery = 4096;

}  // namespace

LaneGraph::LaneGraph(std::vector<LaneSegment> segments, double cell_size)
    : segments_(std::move(segments)), cell_size_(cell_size) {
  if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) {
    throw ConfigError("lane graph cell size must be positive and finite");
  }
  index_.reserve(segments_.size());
  boxes_.reserve(segments_.size());
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (!index_.emplace(segments_[i].id, i).second) {
      throw ConfigError("duplicate lane segment id '" + segments_[i].id + "'");
    }
    const BoundingBox box = bounding_box(segments_[i].centerline);
    boxes_.push_back(box);
    if (segments_[i].centerline.empty()) continue;
    for (long long cx = cell_of(box.min_x); cx <= cell_of(box.max_x); ++cx) {
      for (long long cy = cell_of(box.min_y); cy <= cell_of(box.max_y); ++cy) {
        grid_[{cx, cy}].push_back(i);
      }
    }
  }
}

long long LaneGraph::cell_of(double v) const {
  return static_cast<long long>(std::floor(v / cell_size_));
}

const LaneSegment* LaneGraph::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &segments_[it->second];
}

const LaneSegment& LaneGraph::at(std::string_view id) const {
  const LaneSegment* s = find(id);
  if (s == nullptr) throw QueryError("unknown lane segment id '" + std::string(id) + "'");
  return *s;
}

std::vector<const LaneSegment*> LaneGraph::segments_within(Point2 p, double radius) const {
  std::vector<const LaneSegment*> out;
  if (!(radius >= 0.0)) return out;

  const long long x0 = cell_of(p.x - radius), x1 = cell_of(p.x + radius);
  const long long y0 = cell_of(p.y - radius), y1 = cell_of(p.y + radius);
  const double cells = static_cast<double>(x1 - x0 + 1) * static_cast<double>(y1 - y0 + 1);

  std::vector<std::size_t> candidates;
  if (cells > static_cast<double>(kMaxCellsPerQuery) || cells > static_cast<double>(segments_.size())) {
    candidates.resize(segments_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i) candidates[i] = i;
  } else {
    for (long long cx = x0; cx <= x1; ++cx) {
      for (long long cy = y0; cy <= y1; ++cy) {
        const auto it = grid_.find({cx, cy});
        if (it == grid_.end()) continue;
        candidates.insert(candidates.end(), it->second.begin(), it->second.end());
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  }

  for (const std::size_t i : candidates) {
    const BoundingBox& b = boxes_[i];
    if (p.x + radius < b.min_x || p.x - radius > b.max_x || p.y + radius < b.min_y ||
        p.y - radius > b.max_y) {
      continue;
    }
    if (point_to_centerline_distance(p, segments_[i]) <= radius) out.push_back(&segments_[i]);
  }
  return out;
}

std::vector<Violation> validate_segments(std::span<const LaneSegment> segments) {
  std::vector<Violation> out;
  std::unordered_map<std::string_view, const LaneSegment*> by_id;
  for (const auto& s : segments) {
    if (!by_id.emplace(s.id, &s).second) {
      out.push_back({Violation::Kind::DuplicateId, s.id, s.id});
    }
  }

  for (const auto& s : segments) {
    if (s.centerline.size() < 2) {
      out.push_back({Violation::Kind::DegenerateCenterline, s.id,
                     "centerline has " + std::to_string(s.centerline.size()) + " point(s)"});
    } else {
      for (std::size_t i = 0; i + 1 < s.centerline.size(); ++i) {
        if (s.centerline[i] == s.centerline[i + 1]) {
          out.push_back({Violation::Kind::DegenerateCenterline, s.id,
                         "points " + std::to_string(i) + " and " + std::to_string(i + 1) +
                             " coincide"});
          break;
        }
      }
    }

    auto check_ref = [&](const SegmentId& ref) -> const LaneSegment* {
      const auto it = by_id.find(ref);
      if (it == by_id.end()) {
        out.push_back({Violation::Kind::DanglingId, s.id, ref});
        return nullptr;
      }
      return it->second;
    };

    for (const auto& succ : s.successors) {
      if (const LaneSegment* t = check_ref(succ); t != nullptr && !contains_id(t->predecessors, s.id)) {
        out.push_back({Violation::Kind::AsymmetricLink, s.id, succ});
      }
    }
    for (const auto& pred : s.predecessors) {
      if (const LaneSegment* t = check_ref(pred); t != nullptr && !contains_id(t->successors, s.id)) {
        out.push_back({Violation::Kind::AsymmetricLink, s.id, pred});
      }
    }
    if (s.left_neighbor) check_ref(*s.left_neighbor);
    if (s.right_neighbor) check_ref(*s.right_neighbor);
  }
  return out;
}

std::vector<Violation> validate_graph(const LaneGraph& graph) {
  return validate_segments(graph.segments());
}

double point_to_polyline_distance(Point2 p, std::span<const Point2> polyline) {
  if (polyline.empty()) return std::numeric_limits<double>::infinity();
  if (polyline.size() == 1) return distance(p, polyline.front());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    best = std::min(best, point_segment_distance(p, polyline[i], polyline[i + 1]));
  }
  return best;
}

double point_to_centerline_distance(Point2 p, const LaneSegment& segment) {
  return point_to_polyline_distance(p, segment.centerline);
}

double polyline_max_curvature(std::span<const Point2> polyline) {
  double best = 0.0;
  for (std::size_t i = 0; i + 2 < polyline.size(); ++i) {
    best = std::max(best, menger_curvature(polyline[i], polyline[i + 1], polyline[i + 2]));
  }
  return best;
}

double segment_max_curvature(const LaneSegment& segment) {
  return polyline_max_curvature(segment.centerline);
}

double polyline_orientation_change(std::span<const Point2> polyline) {
  // First and last pieces of nonzero length.
  std::optional<Point2> first, last;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Point2 d = polyline[i + 1] - polyline[i];
    if (d.x != 0.0 || d.y != 0.0) {
      first = d;
      break;
    }
  }
  for (std::size_t i = polyline.size(); i >= 2; --i) {
    const Point2 d = polyline[i - 1] - polyline[i - 2];
    if (d.x != 0.0 || d.y != 0.0) {
      last = d;
      break;
    }
  }
  if (!first || !last) return 0.0;
  return signed_angle(*first, *last);
}

double segment_orientation_change(const LaneSegment& segment) {
  return polyline_orientation_change(segment.centerline);
}

ConnectivityKind connectivity(const LaneGraph& graph, std::string_view from, std::string_view to) {
  const LaneSegment& a = graph.at(from);
  graph.at(to);
  if (contains_id(a.successors, to)) return ConnectivityKind::Successor;
  if (a.left_neighbor && *a.left_neighbor == to) return ConnectivityKind::LeftNeighbor;
  if (a.right_neighbor && *a.right_neighbor == to) return ConnectivityKind::RightNeighbor;
  return ConnectivityKind::Unconnected;
}

}  // namespace lanetrace
