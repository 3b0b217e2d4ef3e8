#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lanetrace/harness/scene_io.hpp"
#include "lanetrace/maneuver.hpp"

namespace lanetrace {

enum class Recipe {
  Straight,
  LeftTurn,
  RightTurn,
  LeftChange,
  RightChange,
  ChangeBoth,
  LeftTurnChange,
  RightTurnChange,
};

inline constexpr std::array<Recipe, 8> kAllRecipes = {
    Recipe::Straight,   Recipe::LeftTurn,    Recipe::RightTurn,      Recipe::LeftChange,
    Recipe::RightChange, Recipe::ChangeBoth, Recipe::LeftTurnChange, Recipe::RightTurnChange};

std::string_view to_string(Recipe r);
// Throws ConfigError for unknown names.
Recipe parse_recipe(std::string_view name);

/// Label a noise-free drive of the recipe must produce.
ManeuverLabel expected_label(Recipe r);

struct SynthSpec {
  Recipe recipe = Recipe::Straight;
  double noise_sigma = 0.0;  // isotropic position noise, meters
  std::uint64_t seed = 0;
  int timestep_count = 50;
  double sample_rate = 10.0;
  // Store turn directions on the map instead of leaving them to inference.
  bool annotate_turns = false;
  // One extra non-target agent driving straight.
  bool background_agent = true;
};

struct SynthScene {
  SceneFile scene;
  std::string target;
  ManeuverLabel label;
};

/// Deterministic scene on a two-lane four-arm intersection map; the target
/// agent drives the recipe's route at a randomized speed profile.
SynthScene synth_scene(const SynthSpec& spec);

/// Reflection about the x-axis: negates y everywhere, swaps left/right
/// neighbor links and stored turn directions.
SceneFile mirror_scene(const SceneFile& scene);

/// K modes around the target's future: one mode per lateral/longitudinal
/// perturbation, deterministic in `seed`.
PredictionSet synth_prediction(const SceneFile& scene, std::string_view agent_id, int obs_steps,
                               int pred_steps, std::size_t modes, std::uint64_t seed);

}  // namespace lanetrace
