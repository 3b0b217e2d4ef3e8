#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lanetrace/dynamics.hpp"
#include "lanetrace/harness/config.hpp"
#include "lanetrace/harness/pipeline.hpp"
#include "lanetrace/harness/scene_io.hpp"
#include "lanetrace/metrics.hpp"

namespace lanetrace {

/// Runs `fn(i)` for i in [0, count) on `workers` threads. Results are indexed,
/// so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// Scene indices ordered by scene id, input order breaking ties.
std::vector<std::size_t> scene_order(std::span<const SceneFile> scenes);

std::vector<const Trajectory*> selected_agents(const SceneFile& scene, bool all_agents);

// --- extract ---

struct ExtractRow {
  std::string scene_id;
  std::string agent_id;
  ExtractionStatus status;
  std::optional<ManeuverLabel> label;
  std::vector<SegmentId> lane_sequence;
};

std::vector<ExtractRow> run_extract(std::span<const SceneFile> scenes, const Config& cfg);
std::string format_extract(std::span<const ExtractRow> rows, OutputFormat format);

// --- analyze ---

struct SplitAnalysis {
  std::string split;
  std::size_t agents = 0;
  Histogram velocity;
  Histogram acceleration;
  Histogram curvature;
  std::size_t no_sequence = 0;
  std::array<std::size_t, 4> turn{};
  std::array<std::size_t, 4> lane_change{};
};

struct AnalysisReport {
  std::vector<SplitAnalysis> splits;  // sorted by split name
};

AnalysisReport run_analyze(std::span<const SceneFile> scenes, const Config& cfg);
std::string format_analysis(const AnalysisReport& report, OutputFormat format);
/// File name -> SVG document, one bar chart per split and quantity.
std::map<std::string, std::string> render_analysis_svgs(const AnalysisReport& report);
std::string render_bar_chart_svg(const std::string& title, const std::vector<std::string>& labels,
                                 const std::vector<std::size_t>& counts);

// --- evaluate ---

struct EvaluationResult {
  std::vector<MetricRecord> records;
  std::vector<GroupedReport> reports;  // one per dimension, in table order
};

/// Throws InputError (validation) listing prediction keys that do not resolve
/// to a scene target, or predictions whose shape does not fit the config.
EvaluationResult run_evaluate(std::span<const SceneFile> scenes, const PredictionFile& predictions,
                              const Config& cfg);
std::string format_evaluation(const EvaluationResult& result, OutputFormat format, int std_ddof = 0);

}  // namespace lanetrace
