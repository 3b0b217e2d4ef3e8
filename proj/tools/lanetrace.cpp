// lanetrace command line: extract, analyze, evaluate, synth, validate.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lanetrace/errors.hpp"
#include "lanetrace/harness/commands.hpp"
#include "lanetrace/harness/scene_io.hpp"
#include "lanetrace/harness/synth.hpp"

namespace fs = std::filesystem;
using namespace lanetrace;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInvalidInput = 2, kGuardTripped = 3 };

std::vector<double> parse_edges(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("invalid bin edge '" + item + "'");
    }
  }
  return out;
}

struct Options {
  std::vector<std::string> inputs;
  std::string predictions;
  std::string output;
  std::string format = "csv";
  std::string svg_dir;
  std::string bins_velocity, bins_acceleration, bins_curvature;
  bool sample_std = false;
  Config cfg;

  // synth
  std::string recipe = "all";
  std::uint64_t seed = 0;
  std::size_t count = 1;
  double noise = 0.0;
  int timesteps = 50;
  bool annotate = false;
  bool with_predictions = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--d-th", o.cfg.match.d_th, "Distance threshold d_th in meters")->capture_default_str();
  cmd->add_option("--p-th", o.cfg.match.p_th, "Assignment confidence threshold")->capture_default_str();
  cmd->add_option("--curvature-min", o.cfg.turn.curvature_min, "Turn inference curvature gate (1/m)")
      ->capture_default_str();
  cmd->add_option("--orientation-min", o.cfg.turn.orientation_min, "Turn inference orientation gate (rad)")
      ->capture_default_str();
  cmd->add_option("--workers", o.cfg.workers, "Worker threads")->capture_default_str();
  cmd->add_flag("--all-agents", o.cfg.all_agents, "Process every agent, not only targets");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("-o,--output", o.output, "Output file (default: stdout)");
}

void add_bins(CLI::App* cmd, Options& o) {
  cmd->add_option("--bins-velocity", o.bins_velocity, "Comma-separated velocity bin edges (m/s)");
  cmd->add_option("--bins-acceleration", o.bins_acceleration, "Comma-separated acceleration bin edges (m/s^2)");
  cmd->add_option("--bins-curvature", o.bins_curvature, "Comma-separated curvature bin edges (1/m)");
}

void finalize_config(Options& o) {
  o.cfg.format = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (!o.bins_velocity.empty()) o.cfg.bins.velocity = BinEdges(parse_edges(o.bins_velocity));
  if (!o.bins_acceleration.empty()) o.cfg.bins.acceleration = BinEdges(parse_edges(o.bins_acceleration));
  if (!o.bins_curvature.empty()) o.cfg.bins.curvature = BinEdges(parse_edges(o.bins_curvature));
  o.cfg.std_ddof = o.sample_std ? 1 : 0;
  o.cfg.validate();
}

std::vector<SceneFile> load_scenes(const std::vector<std::string>& inputs) {
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  std::vector<SceneFile> scenes;
  for (const auto& p : collect_scene_paths(paths)) scenes.push_back(load_scene(p));
  return scenes;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    write_text_file(output, text);
  }
}

int cmd_extract(Options& o) {
  finalize_config(o);
  const auto scenes = load_scenes(o.inputs);
  const auto rows = run_extract(scenes, o.cfg);
  emit(format_extract(rows, o.cfg.format), o.output);
  const bool all_guarded = !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ExtractRow& r) {
    return r.status == ExtractionStatus::PathExplosion;
  });
  return all_guarded ? kGuardTripped : kOk;
}

int cmd_analyze(Options& o) {
  finalize_config(o);
  const auto scenes = load_scenes(o.inputs);
  const auto report = run_analyze(scenes, o.cfg);
  emit(format_analysis(report, o.cfg.format), o.output);
  if (!o.svg_dir.empty()) {
    for (const auto& [name, svg] : render_analysis_svgs(report)) write_text_file(fs::path(o.svg_dir) / name, svg);
  }
  return kOk;
}

int cmd_evaluate(Options& o) {
  finalize_config(o);
  const auto scenes = load_scenes(o.inputs);
  const auto predictions = load_predictions(o.predictions);
  const auto result = run_evaluate(scenes, predictions, o.cfg);
  emit(format_evaluation(result, o.cfg.format, o.cfg.std_ddof), o.output);
  return kOk;
}

int cmd_synth(Options& o) {
  std::vector<Recipe> recipes;
  if (o.recipe == "all") {
    recipes.assign(kAllRecipes.begin(), kAllRecipes.end());
  } else {
    recipes.push_back(parse_recipe(o.recipe));
  }
  const fs::path out_dir = o.output.empty() ? fs::path(".") : fs::path(o.output);
  std::string labels = "scene_id,agent_id,recipe,turn,lane_change\n";
  PredictionFile preds;
  for (std::size_t i = 0; i < o.count; ++i) {
    for (const Recipe r : recipes) {
      SynthSpec spec;
      spec.recipe = r;
      spec.seed = o.seed + i;
      spec.noise_sigma = o.noise;
      spec.timestep_count = o.timesteps;
      spec.annotate_turns = o.annotate;
      const SynthScene s = synth_scene(spec);
      save_scene(s.scene, out_dir / (s.scene.scene_id + ".json"));
      labels += s.scene.scene_id + "," + s.target + "," + std::string(to_string(r)) + "," +
                std::string(to_string(s.label.turn)) + "," + std::string(to_string(s.label.lane_change)) + "\n";
      if (o.with_predictions) {
        preds.predictions.push_back(synth_prediction(s.scene, s.target, o.cfg.obs_steps, o.cfg.pred_steps,
                                                     o.cfg.modes, spec.seed));
      }
    }
  }
  write_text_file(out_dir / "labels.csv", labels);
  if (o.with_predictions) write_text_file(out_dir / "predictions.pred", serialize_predictions(preds));
  return kOk;
}

int cmd_validate(Options& o) {
  std::vector<fs::path> paths(o.inputs.begin(), o.inputs.end());
  int failures = 0;
  for (const auto& p : collect_scene_paths(paths)) {
    try {
      if (p.extension() == ".pred") {
        load_predictions(p);
      } else {
        load_scene(p);
      }
      std::cout << p.string() << ": ok\n";
    } catch (const InputError& e) {
      ++failures;
      std::cout << e.what() << "\n";
    }
  }
  return failures == 0 ? kOk : kInvalidInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maneuver extraction and maneuver-conditioned evaluation of trajectory datasets"};
  app.require_subcommand(1);
  Options o;

  auto* extract = app.add_subcommand("extract", "Extract turn and lane-change labels per agent");
  extract->add_option("scenes", o.inputs, "Scene files or directories")->required();
  add_common(extract, o);

  auto* analyze = app.add_subcommand("analyze", "Dynamics histograms and maneuver distributions per split");
  analyze->add_option("scenes", o.inputs, "Scene files or directories")->required();
  add_common(analyze, o);
  add_bins(analyze, o);
  analyze->add_option("--svg", o.svg_dir, "Directory for SVG bar charts");

  auto* evaluate = app.add_subcommand("evaluate", "minADE/minFDE grouped by dynamics bins and maneuvers");
  evaluate->add_option("scenes", o.inputs, "Scene files or directories")->required();
  evaluate->add_option("-p,--predictions", o.predictions, "Prediction file")->required();
  add_common(evaluate, o);
  add_bins(evaluate, o);
  evaluate->add_option("--modes", o.cfg.modes, "Number of predicted modes K")->capture_default_str();
  evaluate->add_option("--obs-steps", o.cfg.obs_steps, "Observed history steps")->capture_default_str();
  evaluate->add_option("--pred-steps", o.cfg.pred_steps, "Predicted horizon steps")->capture_default_str();
  evaluate->add_flag("--sample-std", o.sample_std, "Use the sample instead of the population standard deviation");

  auto* synth = app.add_subcommand("synth", "Generate synthetic scenes with known maneuvers");
  synth->add_option("--recipe", o.recipe, "Recipe name or 'all'")->capture_default_str();
  synth->add_option("--seed", o.seed, "First seed")->capture_default_str();
  synth->add_option("--count", o.count, "Scenes per recipe")->capture_default_str();
  synth->add_option("--noise", o.noise, "Position noise sigma (m)")->capture_default_str();
  synth->add_option("--timesteps", o.timesteps, "Timesteps per scene")->capture_default_str();
  synth->add_flag("--annotate-turns", o.annotate, "Store turn directions on the map");
  synth->add_flag("--with-predictions", o.with_predictions, "Also write predictions.pred");
  synth->add_option("--modes", o.cfg.modes, "Modes per synthetic prediction")->capture_default_str();
  synth->add_option("--obs-steps", o.cfg.obs_steps, "Observed history steps")->capture_default_str();
  synth->add_option("--pred-steps", o.cfg.pred_steps, "Predicted horizon steps")->capture_default_str();
  synth->add_option("-o,--output", o.output, "Output directory")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Check scene (.json) and prediction (.pred) files");
  validate->add_option("files", o.inputs, "Files or directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*extract) return cmd_extract(o);
    if (*analyze) return cmd_analyze(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*synth) return cmd_synth(o);
    if (*validate) return cmd_validate(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
