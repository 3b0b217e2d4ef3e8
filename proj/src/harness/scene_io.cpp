#include "lanetrace/harness/scene_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "lanetrace/errors.hpp"

namespace lanetrace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string join_problems(const std::string& source, const std::vector<std::string>& problems) {
  std::string msg = source + ":";
  if (problems.size() == 1) return msg + " " + problems.front();
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}

// Collects schema problems with their JSON pointer instead of stopping at the first.
class SchemaReader {
 public:
  explicit SchemaReader(std::string source) : source_(std::move(source)) {}

  void fail(const std::string& where, const std::string& what) {
    problems_.push_back(where + ": " + what);
  }

  const json* field(const json& obj, const std::string& where, const char* key, bool required = true) {
    if (!obj.is_object()) {
      fail(where, "expected an object");
      return nullptr;
    }
    const auto it = obj.find(key);
    if (it == obj.end() || (!required && it->is_null())) {
      if (required) fail(where + "/" + key, "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string_at(const json& obj, const std::string& where, const char* key,
                                       bool required = true) {
    const json* v = field(obj, where, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      fail(where + "/" + key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<double> number_at(const json& obj, const std::string& where, const char* key,
                                  bool required = true) {
    const json* v = field(obj, where, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      fail(where + "/" + key, "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<long long> integer_at(const json& obj, const std::string& where, const char* key,
                                      bool required = true) {
    const json* v = field(obj, where, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      fail(where + "/" + key, "expected an integer");
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::vector<std::string> string_list(const json& obj, const std::string& where, const char* key,
                                       bool required) {
    std::vector<std::string> out;
    const json* v = field(obj, where, key, required);
    if (v == nullptr) return out;
    if (!v->is_array()) {
      fail(where + "/" + key, "expected an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_string()) {
        fail(where + "/" + key + "/" + std::to_string(i), "expected a string");
        continue;
      }
      out.push_back((*v)[i].get<std::string>());
    }
    return out;
  }

  // Accepts [x, y] or [x, y, z]; z is dropped.
  std::optional<Point2> point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() < 2 || v.size() > 3 ||
        !std::all_of(v.begin(), v.end(), [](const json& c) { return c.is_number(); })) {
      fail(where, "expected a point [x, y] or [x, y, z]");
      return std::nullopt;
    }
    const Point2 p{v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(where, "coordinates must be finite");
      return std::nullopt;
    }
    return p;
  }

  std::vector<Point2> point_list(const json& v, const std::string& where) {
    std::vector<Point2> out;
    if (!v.is_array()) {
      fail(where, "expected an array of points");
      return out;
    }
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (auto p = point(v[i], where + "/" + std::to_string(i))) out.push_back(*p);
    }
    return out;
  }

  void check_version(const json& doc) {
    if (const auto v = integer_at(doc, "", "schema_version"); v && *v != kSchemaVersion) {
      fail("/schema_version", "unsupported version " + std::to_string(*v) + " (expected " +
                                  std::to_string(kSchemaVersion) + ")");
    }
  }

  void throw_if_failed() const {
    if (!problems_.empty()) throw InputError(InputError::Kind::Schema, source_, problems_);
  }

 private:
  std::string source_;
  std::vector<std::string> problems_;
};

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError(InputError::Kind::Parse, source, {e.what()});
  }
}

ordered_json point_json(Point2 p) { return ordered_json::array({p.x, p.y}); }

ordered_json points_json(const std::vector<Point2>& pts) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : pts) arr.push_back(point_json(p));
  return arr;
}

}  // namespace

InputError::InputError(Kind kind, std::string source, std::vector<std::string> problems)
    : std::runtime_error(join_problems(source, problems)),
      kind_(kind),
      source_(std::move(source)),
      problems_(std::move(problems)) {}

const Trajectory* SceneFile::find_agent(std::string_view id) const {
  for (const auto& a : agents) {
    if (a.agent_id == id) return &a;
  }
  return nullptr;
}

const PredictionSet* PredictionFile::find(std::string_view scene_id, std::string_view agent_id) const {
  for (const auto& p : predictions) {
    if (p.scene_id == scene_id && p.agent_id == agent_id) return &p;
  }
  return nullptr;
}

SceneFile parse_scene(std::string_view text, const std::string& source) {
  const json doc = parse_json(text, source);
  SchemaReader r(source);
  if (!doc.is_object()) {
    r.fail("", "expected a scene object");
    r.throw_if_failed();
  }
  r.check_version(doc);

  SceneFile scene;
  scene.scene_id = r.string_at(doc, "", "scene_id").value_or("");
  scene.split = r.string_at(doc, "", "split", false).value_or("default");
  if (const auto rate = r.number_at(doc, "", "sample_rate")) {
    if (!(*rate > 0.0)) r.fail("/sample_rate", "must be positive");
    scene.sample_rate = *rate;
  }
  if (const auto n = r.integer_at(doc, "", "timestep_count", false)) {
    if (*n < 1) r.fail("/timestep_count", "must be positive");
    scene.timestep_count = static_cast<int>(*n);
  }
  scene.targets = r.string_list(doc, "", "targets", true);

  std::vector<LaneSegment> segments;
  if (const json* lanes = r.field(doc, "", "lanes")) {
    if (!lanes->is_array()) r.fail("/lanes", "expected an array");
    for (std::size_t i = 0; lanes->is_array() && i < lanes->size(); ++i) {
      const json& l = (*lanes)[i];
      const std::string where = "/lanes/" + std::to_string(i);
      LaneSegment seg;
      seg.id = r.string_at(l, where, "id").value_or("");
      if (const json* c = r.field(l, where, "centerline")) seg.centerline = r.point_list(*c, where + "/centerline");
      if (const auto td = r.string_at(l, where, "turn_direction", false)) {
        if (const auto parsed = parse_turn_direction(*td)) {
          seg.turn_direction = parsed;
        } else {
          r.fail(where + "/turn_direction", "expected one of none, left, right");
        }
      }
      seg.successors = r.string_list(l, where, "successors", false);
      seg.predecessors = r.string_list(l, where, "predecessors", false);
      seg.left_neighbor = r.string_at(l, where, "left_neighbor", false);
      seg.right_neighbor = r.string_at(l, where, "right_neighbor", false);
      segments.push_back(std::move(seg));
    }
  }

  if (const json* agents = r.field(doc, "", "agents")) {
    if (!agents->is_array()) r.fail("/agents", "expected an array");
    for (std::size_t i = 0; agents->is_array() && i < agents->size(); ++i) {
      const json& a = (*agents)[i];
      const std::string where = "/agents/" + std::to_string(i);
      Trajectory traj;
      traj.agent_id = r.string_at(a, where, "id").value_or("");
      traj.sample_rate = scene.sample_rate;
      traj.first_timestep = static_cast<Timestep>(r.integer_at(a, where, "first_timestep", false).value_or(0));
      if (const json* p = r.field(a, where, "positions")) traj.positions = r.point_list(*p, where + "/positions");
      scene.agents.push_back(std::move(traj));
    }
  }
  r.throw_if_failed();

  // Semantic validation.
  std::vector<std::string> problems;
  std::map<std::string, std::size_t> lane_index;
  for (std::size_t i = 0; i < segments.size(); ++i) lane_index.emplace(segments[i].id, i);
  for (const auto& v : validate_segments(segments)) {
    const auto it = lane_index.find(v.segment);
    const std::string where = it == lane_index.end() ? "/lanes" : "/lanes/" + std::to_string(it->second);
    std::string msg = where + " (id '" + v.segment + "'): " + std::string(to_string(v.kind));
    if (v.kind == Violation::Kind::DanglingId) {
      msg += ": unknown id '" + v.detail + "'";
    } else if (v.kind == Violation::Kind::AsymmetricLink) {
      msg += ": link to '" + v.detail + "' has no matching back-link";
    } else if (v.kind == Violation::Kind::DegenerateCenterline) {
      msg += ": " + v.detail;
    }
    problems.push_back(std::move(msg));
  }

  std::set<std::string> agent_ids;
  for (std::size_t i = 0; i < scene.agents.size(); ++i) {
    const auto& a = scene.agents[i];
    const std::string where = "/agents/" + std::to_string(i);
    if (!agent_ids.insert(a.agent_id).second) problems.push_back(where + ": duplicate agent id '" + a.agent_id + "'");
    if (a.positions.size() < 2) problems.push_back(where + ": trajectory needs at least 2 positions");
    if (a.first_timestep < 0) problems.push_back(where + "/first_timestep: must be non-negative");
    if (scene.timestep_count && a.first_timestep + static_cast<long long>(a.positions.size()) > *scene.timestep_count) {
      problems.push_back(where + ": trajectory extends past timestep_count");
    }
  }
  for (std::size_t i = 0; i < scene.targets.size(); ++i) {
    if (!agent_ids.contains(scene.targets[i])) {
      problems.push_back("/targets/" + std::to_string(i) + ": unknown agent id '" + scene.targets[i] + "'");
    }
  }
  if (!problems.empty()) throw InputError(InputError::Kind::Validation, source, problems);

  scene.graph = LaneGraph(std::move(segments));
  return scene;
}

SceneFile load_scene(const std::filesystem::path& path) {
  return parse_scene(read_text_file(path), path.string());
}

std::string serialize_scene(const SceneFile& scene) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["scene_id"] = scene.scene_id;
  doc["split"] = scene.split;
  doc["sample_rate"] = scene.sample_rate;
  if (scene.timestep_count) doc["timestep_count"] = *scene.timestep_count;
  doc["targets"] = scene.targets;

  ordered_json lanes = ordered_json::array();
  for (const auto& s : scene.graph.segments()) {
    ordered_json l;
    l["id"] = s.id;
    l["centerline"] = points_json(s.centerline);
    if (s.turn_direction) l["turn_direction"] = std::string(to_string(*s.turn_direction));
    l["successors"] = s.successors;
    l["predecessors"] = s.predecessors;
    if (s.left_neighbor) l["left_neighbor"] = *s.left_neighbor;
    if (s.right_neighbor) l["right_neighbor"] = *s.right_neighbor;
    lanes.push_back(std::move(l));
  }
  doc["lanes"] = std::move(lanes);

  ordered_json agents = ordered_json::array();
  for (const auto& a : scene.agents) {
    ordered_json j;
    j["id"] = a.agent_id;
    j["first_timestep"] = a.first_timestep;
    j["positions"] = points_json(a.positions);
    agents.push_back(std::move(j));
  }
  doc["agents"] = std::move(agents);
  return doc.dump(1) + "\n";
}

void save_scene(const SceneFile& scene, const std::filesystem::path& path) {
  write_text_file(path, serialize_scene(scene));
}

PredictionFile parse_predictions(std::string_view text, const std::string& source) {
  const json doc = parse_json(text, source);
  SchemaReader r(source);
  if (!doc.is_object()) {
    r.fail("", "expected a prediction file object");
    r.throw_if_failed();
  }
  r.check_version(doc);

  PredictionFile file;
  if (const json* preds = r.field(doc, "", "predictions")) {
    if (!preds->is_array()) r.fail("/predictions", "expected an array");
    for (std::size_t i = 0; preds->is_array() && i < preds->size(); ++i) {
      const json& p = (*preds)[i];
      const std::string where = "/predictions/" + std::to_string(i);
      PredictionSet set;
      set.scene_id = r.string_at(p, where, "scene_id").value_or("");
      set.agent_id = r.string_at(p, where, "agent_id").value_or("");
      if (const json* modes = r.field(p, where, "modes")) {
        if (!modes->is_array() || modes->empty()) {
          r.fail(where + "/modes", "expected a non-empty array of modes");
        } else {
          for (std::size_t k = 0; k < modes->size(); ++k) {
            set.modes.push_back(r.point_list((*modes)[k], where + "/modes/" + std::to_string(k)));
          }
        }
      }
      file.predictions.push_back(std::move(set));
    }
  }
  r.throw_if_failed();

  std::vector<std::string> problems;
  std::set<std::pair<std::string, std::string>> keys;
  for (std::size_t i = 0; i < file.predictions.size(); ++i) {
    const auto& p = file.predictions[i];
    const std::string where = "/predictions/" + std::to_string(i);
    if (!keys.emplace(p.scene_id, p.agent_id).second) {
      problems.push_back(where + ": duplicate key (" + p.scene_id + ", " + p.agent_id + ")");
    }
    const std::size_t h = p.horizon();
    if (h == 0) problems.push_back(where + "/modes/0: horizon must be at least 1");
    for (std::size_t k = 1; k < p.modes.size(); ++k) {
      if (p.modes[k].size() != h) {
        problems.push_back(where + "/modes/" + std::to_string(k) + ": horizon " +
                           std::to_string(p.modes[k].size()) + " differs from mode 0 (" +
                           std::to_string(h) + ")");
      }
    }
  }
  if (!problems.empty()) throw InputError(InputError::Kind::Validation, source, problems);
  return file;
}

PredictionFile load_predictions(const std::filesystem::path& path) {
  return parse_predictions(read_text_file(path), path.string());
}

std::string serialize_predictions(const PredictionFile& file) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  ordered_json preds = ordered_json::array();
  for (const auto& p : file.predictions) {
    ordered_json j;
    j["scene_id"] = p.scene_id;
    j["agent_id"] = p.agent_id;
    ordered_json modes = ordered_json::array();
    for (const auto& m : p.modes) modes.push_back(points_json(m));
    j["modes"] = std::move(modes);
    preds.push_back(std::move(j));
  }
  doc["predictions"] = std::move(preds);
  return doc.dump(1) + "\n";
}

std::vector<std::filesystem::path> collect_scene_paths(const std::vector<std::filesystem::path>& inputs) {
  std::vector<std::filesystem::path> out;
  for (const auto& in : inputs) {
    std::error_code ec;
    if (std::filesystem::is_directory(in, ec)) {
      std::vector<std::filesystem::path> found;
      for (const auto& entry : std::filesystem::directory_iterator(in)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(in);
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(InputError::Kind::Io, path.string(), {"cannot open file for reading"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open file for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace lanetrace
