#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lanetrace/geometry.hpp"

namespace lanetrace {

using SegmentId = std::string;

enum class TurnDirection { None, Left, Right };

enum class ConnectivityKind { Successor, LeftNeighbor, RightNeighbor, Unconnected };

std::string_view to_string(TurnDirection d);
std::string_view to_string(ConnectivityKind k);
std::optional<TurnDirection> parse_turn_direction(std::string_view s);

struct LaneSegment {
  SegmentId id;
  std::vector<Point2> centerline;
  std::optional<TurnDirection> turn_direction;
  std::vector<SegmentId> successors;
  std::vector<SegmentId> predecessors;
  std::optional<SegmentId> left_neighbor;
  std::optional<SegmentId> right_neighbor;
};

struct Violation {
  enum class Kind { DuplicateId, DanglingId, AsymmetricLink, DegenerateCenterline };

  Kind kind;
  SegmentId segment;
  // Referenced id for DanglingId / AsymmetricLink, human-readable reason otherwise.
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string_view to_string(Violation::Kind k);

struct BoundingBox {
  double min_x, min_y, max_x, max_y;
};

/// Immutable collection of lane segments keyed by id, with a uniform-grid
/// spatial index over centerline bounding boxes.
///
/// Construction only rejects duplicate ids. Dangling references and other
/// broken invariants are tolerated so they can be reported by validate_graph().
class LaneGraph {
 public:
  static constexpr double kDefaultCellSize = 25.0;

  LaneGraph() = default;
  explicit LaneGraph(std::vector<LaneSegment> segments, double cell_size = kDefaultCellSize);

  std::span<const LaneSegment> segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }

  const LaneSegment* find(std::string_view id) const;
  // Throws QueryError on unknown ids.
  const LaneSegment& at(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  /// Segments whose centerline lies within `radius` of `p` (inclusive), in
  /// construction order. Exact: equal to a linear scan over all segments.
  std::vector<const LaneSegment*> segments_within(Point2 p, double radius) const;

 private:
  struct CellKey {
    long long cx, cy;
    friend bool operator==(const CellKey&, const CellKey&) = default;
  };
  struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const noexcept {
      return std::hash<long long>{}(k.cx) * 1000003u ^ std::hash<long long>{}(k.cy);
    }
  };

  long long cell_of(double v) const;

  std::vector<LaneSegment> segments_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<BoundingBox> boxes_;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> grid_;
  double cell_size_ = kDefaultCellSize;
};

/// Reports every broken segment/graph invariant. Neighbor links are not
/// required to be symmetric.
std::vector<Violation> validate_segments(std::span<const LaneSegment> segments);
std::vector<Violation> validate_graph(const LaneGraph& graph);

double point_to_centerline_distance(Point2 p, const LaneSegment& segment);
double point_to_polyline_distance(Point2 p, std::span<const Point2> polyline);

/// Maximum Menger curvature over consecutive centerline point triples, 0 when
/// there is no triple.
double segment_max_curvature(const LaneSegment& segment);
double polyline_max_curvature(std::span<const Point2> polyline);

/// Heading of the last centerline piece minus heading of the first, wrapped
/// to (-pi, pi]. Left (counterclockwise) is positive.
double segment_orientation_change(const LaneSegment& segment);
double polyline_orientation_change(std::span<const Point2> polyline);

/// Successor takes precedence over neighbor links when both hold.
/// Throws QueryError when either id is unknown.
ConnectivityKind connectivity(const LaneGraph& graph, std::string_view from, std::string_view to);

}  // namespace lanetrace
