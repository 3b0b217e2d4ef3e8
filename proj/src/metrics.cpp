#include "lanetrace/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "lanetrace/errors.hpp"

namespace lanetrace {

namespace {

void check_shape(const PredictionSet& pred, std::span<const Point2> gt) {
  if (pred.modes.empty()) throw ShapeError("prediction has no modes");
  if (gt.empty()) throw ShapeError("ground truth is empty");
  for (const auto& m : pred.modes) {
    if (m.size() != gt.size()) {
      throw ShapeError("mode horizon " + std::to_string(m.size()) +
                       " does not match ground truth length " + std::to_string(gt.size()));
    }
  }
}

}  // namespace

double min_ade(const PredictionSet& pred, std::span<const Point2> ground_truth) {
  check_shape(pred, ground_truth);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& mode : pred.modes) {
    double sum = 0.0;
    for (std::size_t h = 0; h < mode.size(); ++h) sum += distance(mode[h], ground_truth[h]);
    best = std::min(best, sum / static_cast<double>(mode.size()));
  }
  return best;
}

double min_fde(const PredictionSet& pred, std::span<const Point2> ground_truth) {
  check_shape(pred, ground_truth);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& mode : pred.modes) best = std::min(best, distance(mode.back(), ground_truth.back()));
  return best;
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Velocity: return "velocity";
    case Dimension::Acceleration: return "acceleration";
    case Dimension::Curvature: return "curvature";
    case Dimension::Turn: return "turn";
    case Dimension::LaneChange: return "lane_change";
  }
  return "velocity";
}

std::string_view dimension_title(Dimension d) {
  switch (d) {
    case Dimension::Velocity: return "Average velocity (m/s)";
    case Dimension::Acceleration: return "Average acceleration (m/s^2)";
    case Dimension::Curvature: return "Maximum curvature (1e-2 1/m)";
    case Dimension::Turn: return "Turn maneuver";
    case Dimension::LaneChange: return "Lane change maneuver";
  }
  return "";
}

void RunningStats::add(double v) {
  ++n;
  sum += v;
  sum_sq += v * v;
}

void RunningStats::merge(const RunningStats& o) {
  n += o.n;
  sum += o.sum;
  sum_sq += o.sum_sq;
}

double RunningStats::mean() const {
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

double RunningStats::stddev(int ddof) const {
  if (n == 0 || static_cast<long long>(n) - ddof <= 0) return std::numeric_limits<double>::quiet_NaN();
  const double m = sum / static_cast<double>(n);
  const double ss = std::max(0.0, sum_sq - static_cast<double>(n) * m * m);
  return std::sqrt(ss / static_cast<double>(static_cast<long long>(n) - ddof));
}

std::size_t GroupedReport::total() const {
  return std::accumulate(rows.begin(), rows.end(), std::size_t{0},
                         [](std::size_t acc, const GroupRow& r) { return acc + r.ade.n; });
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> bin_labels(const BinEdges& edges, double scale) {
  std::vector<std::string> out;
  const auto& e = edges.edges;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    const bool last = i + 2 == e.size();
    out.push_back("[" + format_number(e[i] * scale) + ", " + format_number(e[i + 1] * scale) +
                  (last ? "]" : ")"));
  }
  return out;
}

double display_scale(Dimension d) { return d == Dimension::Curvature ? 100.0 : 1.0; }

namespace {

const BinEdges& edges_for(Dimension d, const GroupingBins& bins) {
  switch (d) {
    case Dimension::Acceleration: return bins.acceleration;
    case Dimension::Curvature: return bins.curvature;
    default: return bins.velocity;
  }
}

std::vector<std::string> labels_for(Dimension d, const GroupingBins& bins) {
  std::vector<std::string> labels;
  switch (d) {
    case Dimension::Velocity:
    case Dimension::Acceleration:
    case Dimension::Curvature:
      labels = bin_labels(edges_for(d, bins), display_scale(d));
      labels.emplace_back(kOutOfRangeGroup);
      break;
    case Dimension::Turn:
      for (auto m : {TurnManeuver::GoingStraight, TurnManeuver::TurningLeft,
                     TurnManeuver::TurningRight, TurnManeuver::Both}) {
        labels.emplace_back(display_name(m));
      }
      break;
    case Dimension::LaneChange:
      for (auto m : {LaneChangeManeuver::FollowingLane, LaneChangeManeuver::ChangingLaneLeft,
                     LaneChangeManeuver::ChangingLaneRight, LaneChangeManeuver::Both}) {
        labels.emplace_back(display_name(m));
      }
      break;
  }
  if (d == Dimension::Curvature || d == Dimension::Turn || d == Dimension::LaneChange) {
    labels.emplace_back(kNoSequenceGroup);
  }
  return labels;
}

// Row index of a record within labels_for(d, bins).
std::size_t group_index(const MetricRecord& r, Dimension d, const GroupingBins& bins) {
  const auto& edges = edges_for(d, bins);
  const std::size_t out_of_range = edges.bin_count();
  switch (d) {
    case Dimension::Velocity: return edges.bin_of(r.avg_velocity).value_or(out_of_range);
    case Dimension::Acceleration: return edges.bin_of(r.avg_acceleration).value_or(out_of_range);
    case Dimension::Curvature:
      if (!r.max_curvature) return out_of_range + 1;
      return edges.bin_of(*r.max_curvature).value_or(out_of_range);
    case Dimension::Turn: return r.turn ? static_cast<std::size_t>(*r.turn) : 4;
    case Dimension::LaneChange: return r.lane_change ? static_cast<std::size_t>(*r.lane_change) : 4;
  }
  return 0;
}

}  // namespace

std::string group_label(const MetricRecord& r, Dimension d, const GroupingBins& bins) {
  return labels_for(d, bins).at(group_index(r, d, bins));
}

GroupedReport grouped_evaluate(std::span<const MetricRecord> records, Dimension d,
                               const GroupingBins& bins) {
  GroupedReport report{d, {}};
  for (auto& label : labels_for(d, bins)) report.rows.push_back({std::move(label), {}, {}});
  for (const auto& r : records) {
    auto& row = report.rows[group_index(r, d, bins)];
    row.ade.add(r.min_ade);
    row.fde.add(r.min_fde);
  }
  return report;
}

}  // namespace lanetrace
