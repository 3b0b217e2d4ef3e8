#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "lanetrace/harness/scene_io.hpp"
#include "lanetrace/harness/synth.hpp"

using namespace lanetrace;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "scene_id": "mini",
  "sample_rate": 10,
  "targets": ["car"],
  "lanes": [{"id": "A", "centerline": [[0, 0], [50, 0]]}],
  "agents": [{"id": "car", "positions": [[0, 0], [1, 0], [2, 0, 0.4]]}]
})";

InputError expect_error(const std::string& text) {
  try {
    parse_scene(text, "case.json");
  } catch (const InputError& e) {
    return e;
  }
  FAIL("no InputError for: " << text);
  throw;
}

std::string replaced(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

bool mentions(const InputError& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lanetrace_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("scene_io") {
  TEST_CASE("minimal scene") {
    const auto s = parse_scene(kMinimal);
    CHECK(s.scene_id == "mini");
    CHECK(s.split == "default");
    CHECK(s.sample_rate == 10.0);
    CHECK(s.targets == std::vector<std::string>{"car"});
    REQUIRE(s.agents.size() == 1);
    CHECK(s.agents[0].positions.size() == 3);
    CHECK(s.agents[0].positions[2] == Point2{2, 0});
    CHECK(s.agents[0].sample_rate == 10.0);
    CHECK(s.graph.size() == 1);
    CHECK(s.find_agent("car") != nullptr);
    CHECK(s.find_agent("bus") == nullptr);
  }

  TEST_CASE("unknown successor is a validation error naming the id") {
    const auto e = expect_error(replaced(kMinimal, R"("id": "A",)", R"("id": "A", "successors": ["ghost"],)"));
    CHECK(e.kind() == InputError::Kind::Validation);
    CHECK(mentions(e, "ghost"));
    CHECK(mentions(e, "/lanes/0"));
    CHECK(mentions(e, "case.json"));
  }

  TEST_CASE("syntax errors carry a position") {
    const auto e = expect_error("{\n \"scene_id\": \"x\",\n ]");
    CHECK(e.kind() == InputError::Kind::Parse);
    CHECK(mentions(e, "line 3"));
  }

  TEST_CASE("schema errors list every missing field") {
    const auto e = expect_error(R"({"schema_version": 1, "lanes": [{"centerline": [[0, 0], [1, 0]]}]})");
    CHECK(e.kind() == InputError::Kind::Schema);
    CHECK(mentions(e, "scene_id"));
    CHECK(mentions(e, "sample_rate"));
    CHECK(mentions(e, "agents"));
    CHECK(mentions(e, "/lanes/0"));
    CHECK(e.problems().size() >= 4);
  }

  TEST_CASE("bad points and versions") {
    CHECK(expect_error(replaced(kMinimal, "[50, 0]", "[50]")).kind() == InputError::Kind::Schema);
    CHECK(expect_error(replaced(kMinimal, "[50, 0]", R"(["a", 0])")).kind() == InputError::Kind::Schema);
    CHECK(mentions(expect_error(replaced(kMinimal, R"("schema_version": 1)", R"("schema_version": 7)")), "schema_version"));
    CHECK(mentions(expect_error(replaced(kMinimal, R"("id": "A",)", R"("id": "A", "turn_direction": "up",)")),
                   "turn_direction"));
  }

  TEST_CASE("semantic checks") {
    CHECK(mentions(expect_error(replaced(kMinimal, R"(["car"])", R"(["bus"])")), "bus"));
    CHECK(mentions(expect_error(replaced(kMinimal, "[[0, 0], [1, 0], [2, 0, 0.4]]", "[[0, 0]]")), "at least 2"));
    CHECK(mentions(expect_error(replaced(kMinimal, R"("sample_rate": 10,)", R"("sample_rate": 10, "timestep_count": 2,)")),
                   "timestep_count"));
    CHECK(mentions(expect_error(replaced(kMinimal, R"([2, 0, 0.4]]})", R"([2, 0, 0.4]]}, {"id": "car", "positions": [[0, 0], [1, 1]]})")),
                   "duplicate agent"));
    CHECK(expect_error(replaced(kMinimal, R"("sample_rate": 10)", R"("sample_rate": -1)")).kind() !=
          InputError::Kind::Io);
  }

  TEST_CASE("missing file is an io error") {
    try {
      load_scene("/nonexistent/lanetrace/scene.json");
      FAIL("expected throw");
    } catch (const InputError& e) {
      CHECK(e.kind() == InputError::Kind::Io);
    }
  }

  TEST_CASE("round trip through text and files") {
    for (const Recipe r : kAllRecipes) {
      SynthSpec spec;
      spec.recipe = r;
      spec.seed = 5;
      spec.noise_sigma = 0.1;
      spec.annotate_turns = r == Recipe::LeftTurn;
      const auto scene = synth_scene(spec).scene;
      const std::string text = serialize_scene(scene);
      const auto back = parse_scene(text);
      CHECK(serialize_scene(back) == text);
      CHECK(nlohmann::json::parse(text) == nlohmann::json::parse(serialize_scene(back)));
      CHECK(back.scene_id == scene.scene_id);
      CHECK(back.agents.size() == scene.agents.size());
      CHECK(back.agents[0].positions == scene.agents[0].positions);
      CHECK(back.graph.size() == scene.graph.size());
    }
    const auto dir = temp_dir("roundtrip");
    const auto scene = parse_scene(kMinimal);
    save_scene(scene, dir / "a.json");
    CHECK(serialize_scene(load_scene(dir / "a.json")) == serialize_scene(scene));
    fs::remove_all(dir);
  }

  TEST_CASE("predictions") {
    std::string text = R"({"schema_version": 1, "predictions": [{"scene_id": "s", "agent_id": "a", "modes": [)";
    for (int m = 0; m < 6; ++m) {
      text += m ? ",[" : "[";
      for (int t = 0; t < 30; ++t) text += (t ? ",[" : "[") + std::to_string(t) + "," + std::to_string(m) + "]";
      text += "]";
    }
    text += "]}]}";
    const auto p = parse_predictions(text);
    REQUIRE(p.predictions.size() == 1);
    CHECK(p.predictions[0].modes.size() == 6);
    CHECK(p.predictions[0].horizon() == 30);
    CHECK(p.find("s", "a") != nullptr);
    CHECK(p.find("s", "b") == nullptr);
    CHECK(parse_predictions(serialize_predictions(p)).predictions[0].modes == p.predictions[0].modes);

    CHECK_THROWS_AS(parse_predictions(R"({"schema_version": 1, "predictions": [
        {"scene_id": "s", "agent_id": "a", "modes": [[[0, 0], [1, 1]], [[0, 0]]]}]})"),
                    InputError);
    CHECK_THROWS_AS(parse_predictions(R"({"schema_version": 1, "predictions": [
        {"scene_id": "s", "agent_id": "a", "modes": [[[0, 0]]]},
        {"scene_id": "s", "agent_id": "a", "modes": [[[0, 0]]]}]})"),
                    InputError);
    CHECK_THROWS_AS(parse_predictions(R"({"schema_version": 1, "predictions": [{"scene_id": "s", "agent_id": "a", "modes": []}]})"),
                    InputError);
  }

  TEST_CASE("scene paths from directories are sorted json files") {
    const auto dir = temp_dir("paths");
    write_text_file(dir / "b.json", "{}");
    write_text_file(dir / "a.json", "{}");
    write_text_file(dir / "notes.txt", "x");
    const auto paths = collect_scene_paths({dir});
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].filename() == "a.json");
    CHECK(paths[1].filename() == "b.json");
    fs::remove_all(dir);
  }
}
