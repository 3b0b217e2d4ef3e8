#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lanetrace/lane_graph.hpp"
#include "lanetrace/matching.hpp"
#include "lanetrace/metrics.hpp"

namespace lanetrace {

inline constexpr int kSchemaVersion = 1;

struct SceneFile {
  std::string scene_id;
  std::string split = "default";
  double sample_rate = 10.0;
  std::optional<int> timestep_count;
  std::vector<std::string> targets;
  std::vector<Trajectory> agents;
  LaneGraph graph;

  const Trajectory* find_agent(std::string_view id) const;
};

struct PredictionFile {
  std::vector<PredictionSet> predictions;

  const PredictionSet* find(std::string_view scene_id, std::string_view agent_id) const;
};

/// Malformed or invalid input file. Each problem carries its location
/// (line/column for syntax errors, a JSON pointer for schema and validation).
class InputError : public std::runtime_error {
 public:
  enum class Kind { Io, Parse, Schema, Validation };

  InputError(Kind kind, std::string source, std::vector<std::string> problems);

  Kind kind() const { return kind_; }
  const std::string& source() const { return source_; }
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  Kind kind_;
  std::string source_;
  std::vector<std::string> problems_;
};

SceneFile parse_scene(std::string_view text, const std::string& source = "<memory>");
SceneFile load_scene(const std::filesystem::path& path);
std::string serialize_scene(const SceneFile& scene);
void save_scene(const SceneFile& scene, const std::filesystem::path& path);

PredictionFile parse_predictions(std::string_view text, const std::string& source = "<memory>");
PredictionFile load_predictions(const std::filesystem::path& path);
std::string serialize_predictions(const PredictionFile& file);

/// Expands directories into their *.json files (sorted); plain files pass through.
std::vector<std::filesystem::path> collect_scene_paths(const std::vector<std::filesystem::path>& inputs);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace lanetrace
