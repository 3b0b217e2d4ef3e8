#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lanetrace/dynamics.hpp"
#include "lanetrace/geometry.hpp"
#include "lanetrace/maneuver.hpp"

namespace lanetrace {

using Path = std::vector<Point2>;

struct PredictionSet {
  std::string scene_id;
  std::string agent_id;
  std::vector<Path> modes;  // K modes of identical horizon H

  std::size_t horizon() const { return modes.empty() ? 0 : modes.front().size(); }
};

/// Both throw ShapeError when the set has no modes or a mode's horizon differs
/// from the ground truth.
double min_ade(const PredictionSet& pred, std::span<const Point2> ground_truth);
double min_fde(const PredictionSet& pred, std::span<const Point2> ground_truth);

struct MetricRecord {
  std::string scene_id;
  std::string agent_id;
  double min_ade = 0.0;
  double min_fde = 0.0;
  // Grouping keys.
  double avg_velocity = 0.0;
  double avg_acceleration = 0.0;
  std::optional<double> max_curvature;
  std::optional<TurnManeuver> turn;
  std::optional<LaneChangeManeuver> lane_change;
};

enum class Dimension { Velocity, Acceleration, Curvature, Turn, LaneChange };

inline constexpr std::array<Dimension, 5> kAllDimensions = {
    Dimension::Velocity, Dimension::Acceleration, Dimension::Curvature, Dimension::Turn,
    Dimension::LaneChange};

std::string_view to_string(Dimension d);
std::string_view dimension_title(Dimension d);

inline constexpr std::string_view kOutOfRangeGroup = "out-of-range";
inline constexpr std::string_view kNoSequenceGroup = "no-sequence";

/// Count, sum and sum of squares; merging is commutative and associative.
struct RunningStats {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v);
  void merge(const RunningStats& o);
  double mean() const;
  // ddof = 0 gives the population estimator, 1 the sample estimator.
  double stddev(int ddof = 0) const;
};

struct GroupRow {
  std::string label;
  RunningStats ade;
  RunningStats fde;
};

struct GroupedReport {
  Dimension dimension;
  std::vector<GroupRow> rows;

  std::size_t total() const;
};

struct GroupingBins {
  BinEdges velocity = default_bins::velocity();
  BinEdges acceleration = default_bins::acceleration();
  BinEdges curvature = default_bins::curvature();
};

/// "[0, 4)" style labels, right-closed for the last bin. Values are multiplied
/// by `scale` before printing.
std::vector<std::string> bin_labels(const BinEdges& edges, double scale = 1.0);
double display_scale(Dimension d);

/// Group label of one record, as it appears in the report rows.
std::string group_label(const MetricRecord& r, Dimension d, const GroupingBins& bins);

/// Every group appears, empty ones included: bins then out-of-range for
/// numeric dimensions, the four maneuvers for label dimensions, and a
/// no-sequence row where the key can be missing.
GroupedReport grouped_evaluate(std::span<const MetricRecord> records, Dimension d,
                               const GroupingBins& bins = {});

std::string format_number(double v);

}  // namespace lanetrace
