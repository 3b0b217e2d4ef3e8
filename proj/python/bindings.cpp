#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <tuple>
#include <vector>

#include "lanetrace/dynamics.hpp"
#include "lanetrace/errors.hpp"
#include "lanetrace/harness/commands.hpp"
#include "lanetrace/harness/pipeline.hpp"
#include "lanetrace/harness/scene_io.hpp"
#include "lanetrace/harness/synth.hpp"
#include "lanetrace/lane_graph.hpp"
#include "lanetrace/matching.hpp"
#include "lanetrace/metrics.hpp"

namespace py = pybind11;
using namespace lanetrace;

namespace {

using XY = std::array<double, 2>;

std::vector<Point2> to_points(const std::vector<XY>& xy) {
  std::vector<Point2> out;
  out.reserve(xy.size());
  for (const auto& p : xy) out.push_back({p[0], p[1]});
  return out;
}

std::vector<XY> to_xy(const std::vector<Point2>& pts) {
  std::vector<XY> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back({p.x, p.y});
  return out;
}

Trajectory make_trajectory(const std::vector<XY>& positions, double sample_rate) {
  Trajectory t;
  t.agent_id = "agent";
  t.sample_rate = sample_rate;
  t.positions = to_points(positions);
  return t;
}

Config make_config(double d_th, double p_th) {
  Config cfg;
  cfg.match.d_th = d_th;
  cfg.match.p_th = p_th;
  return cfg;
}

py::dict label_dict(const ManeuverLabel& l) {
  py::dict d;
  d["turn"] = std::string(to_string(l.turn));
  d["lane_change"] = std::string(to_string(l.lane_change));
  d["confidence"] = l.source_sequence_confidence;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Maneuver extraction, dataset analysis and grouped prediction metrics";

  py::enum_<TurnDirection>(m, "TurnDirection")
      .value("NONE", TurnDirection::None)
      .value("LEFT", TurnDirection::Left)
      .value("RIGHT", TurnDirection::Right);

  py::enum_<ConnectivityKind>(m, "ConnectivityKind")
      .value("SUCCESSOR", ConnectivityKind::Successor)
      .value("LEFT_NEIGHBOR", ConnectivityKind::LeftNeighbor)
      .value("RIGHT_NEIGHBOR", ConnectivityKind::RightNeighbor)
      .value("UNCONNECTED", ConnectivityKind::Unconnected);

  py::enum_<TurnManeuver>(m, "TurnManeuver")
      .value("GOING_STRAIGHT", TurnManeuver::GoingStraight)
      .value("TURNING_LEFT", TurnManeuver::TurningLeft)
      .value("TURNING_RIGHT", TurnManeuver::TurningRight)
      .value("BOTH", TurnManeuver::Both);

  py::enum_<LaneChangeManeuver>(m, "LaneChangeManeuver")
      .value("FOLLOWING_LANE", LaneChangeManeuver::FollowingLane)
      .value("CHANGING_LANE_LEFT", LaneChangeManeuver::ChangingLaneLeft)
      .value("CHANGING_LANE_RIGHT", LaneChangeManeuver::ChangingLaneRight)
      .value("BOTH", LaneChangeManeuver::Both);

  py::class_<LaneSegment>(m, "LaneSegment")
      .def(py::init([](std::string id, const std::vector<XY>& centerline, std::vector<std::string> successors,
                       std::vector<std::string> predecessors, std::optional<std::string> left_neighbor,
                       std::optional<std::string> right_neighbor, std::optional<TurnDirection> turn_direction) {
             LaneSegment s;
             s.id = std::move(id);
             s.centerline = to_points(centerline);
             s.successors = std::move(successors);
             s.predecessors = std::move(predecessors);
             s.left_neighbor = std::move(left_neighbor);
             s.right_neighbor = std::move(right_neighbor);
             s.turn_direction = turn_direction;
             return s;
           }),
           py::arg("id"), py::arg("centerline"), py::arg("successors") = std::vector<std::string>{},
           py::arg("predecessors") = std::vector<std::string>{}, py::arg("left_neighbor") = py::none(),
           py::arg("right_neighbor") = py::none(), py::arg("turn_direction") = py::none())
      .def_readwrite("id", &LaneSegment::id)
      .def_property(
          "centerline", [](const LaneSegment& s) { return to_xy(s.centerline); },
          [](LaneSegment& s, const std::vector<XY>& c) { s.centerline = to_points(c); })
      .def_readwrite("successors", &LaneSegment::successors)
      .def_readwrite("predecessors", &LaneSegment::predecessors)
      .def_readwrite("left_neighbor", &LaneSegment::left_neighbor)
      .def_readwrite("right_neighbor", &LaneSegment::right_neighbor)
      .def_readwrite("turn_direction", &LaneSegment::turn_direction)
      .def("__repr__", [](const LaneSegment& s) { return "<LaneSegment '" + s.id + "'>"; });

  py::class_<LaneGraph>(m, "LaneGraph")
      .def(py::init([](std::vector<LaneSegment> segs) { return LaneGraph(std::move(segs)); }), py::arg("segments"))
      .def("__len__", &LaneGraph::size)
      .def("__contains__", [](const LaneGraph& g, const std::string& id) { return g.contains(id); })
      .def("__getitem__", [](const LaneGraph& g, const std::string& id) { return g.at(id); })
      .def_property_readonly("segments",
                             [](const LaneGraph& g) {
                               return std::vector<LaneSegment>(g.segments().begin(), g.segments().end());
                             })
      .def("segments_within", [](const LaneGraph& g, XY p, double radius) {
        std::vector<std::string> ids;
        for (const LaneSegment* s : g.segments_within({p[0], p[1]}, radius)) ids.push_back(s->id);
        return ids;
      });

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("agent_id", &Trajectory::agent_id)
      .def_readonly("sample_rate", &Trajectory::sample_rate)
      .def_readonly("first_timestep", &Trajectory::first_timestep)
      .def_property_readonly("positions", [](const Trajectory& t) { return to_xy(t.positions); });

  py::class_<SceneFile>(m, "Scene")
      .def_readonly("scene_id", &SceneFile::scene_id)
      .def_readonly("split", &SceneFile::split)
      .def_readonly("sample_rate", &SceneFile::sample_rate)
      .def_readonly("targets", &SceneFile::targets)
      .def_readonly("agents", &SceneFile::agents)
      .def_readonly("graph", &SceneFile::graph)
      .def("to_json", &serialize_scene);

  m.def("validate_graph", [](const LaneGraph& g) {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& v : validate_graph(g)) out.emplace_back(std::string(to_string(v.kind)), v.segment, v.detail);
    return out;
  });
  m.def("point_to_centerline_distance", [](XY p, const LaneSegment& s) {
    return point_to_centerline_distance({p[0], p[1]}, s);
  });
  m.def("segment_max_curvature", &segment_max_curvature);
  m.def("segment_orientation_change", &segment_orientation_change);
  m.def("connectivity", &connectivity, py::arg("graph"), py::arg("from_id"), py::arg("to_id"));
  m.def("assignment_confidence", &assignment_confidence, py::arg("d"), py::arg("d_th") = 5.0);

  m.def(
      "assign_timesteps",
      [](const std::vector<XY>& positions, const LaneGraph& g, double d_th, double p_th) {
        MatchConfig cfg{d_th, p_th, 0.0};
        std::vector<std::vector<std::pair<std::string, double>>> out;
        for (const auto& rec : assign_timesteps(make_trajectory(positions, 10.0), g, cfg)) {
          auto& row = out.emplace_back();
          for (const auto& e : rec.entries) row.emplace_back(e.segment, e.confidence);
        }
        return out;
      },
      py::arg("positions"), py::arg("graph"), py::arg("d_th") = 5.0, py::arg("p_th") = 0.5);

  m.def("build_intervals", [](const std::vector<std::vector<std::pair<std::string, double>>>& per_step) {
    std::vector<TimestepAssignment> recs;
    for (std::size_t t = 0; t < per_step.size(); ++t) {
      TimestepAssignment rec{static_cast<Timestep>(t), {}};
      for (const auto& [id, conf] : per_step[t]) rec.entries.push_back({id, conf});
      recs.push_back(std::move(rec));
    }
    std::vector<std::tuple<std::string, int, int>> out;
    for (const auto& iv : build_intervals(recs)) out.emplace_back(iv.segment, iv.start, iv.end);
    return out;
  });

  m.def(
      "extract_maneuver",
      [](const std::vector<XY>& positions, const LaneGraph& g, double d_th, double p_th) {
        const Extraction ex = extract_maneuver(make_trajectory(positions, 10.0), g, make_config(d_th, p_th));
        py::dict d;
        d["status"] = std::string(to_string(ex.status));
        if (ex.label) d.attr("update")(label_dict(*ex.label));
        d["lane_sequence"] = ex.sequence ? ex.sequence->segment_ids() : std::vector<std::string>{};
        return d;
      },
      py::arg("positions"), py::arg("graph"), py::arg("d_th") = 5.0, py::arg("p_th") = 0.5);

  m.def(
      "average_velocity",
      [](const std::vector<XY>& positions, double rate) { return average_velocity(make_trajectory(positions, rate)); },
      py::arg("positions"), py::arg("sample_rate") = 10.0);
  m.def(
      "average_acceleration",
      [](const std::vector<XY>& positions, double rate) {
        return average_acceleration(make_trajectory(positions, rate));
      },
      py::arg("positions"), py::arg("sample_rate") = 10.0);

  m.def("build_histogram", [](const std::vector<double>& samples, const std::vector<double>& edges) {
    const Histogram h = build_histogram(samples, edges);
    py::dict d;
    d["edges"] = h.edges;
    d["counts"] = h.counts;
    d["underflow"] = h.underflow;
    d["overflow"] = h.overflow;
    return d;
  });

  auto make_pred = [](const std::vector<std::vector<XY>>& modes) {
    PredictionSet p;
    for (const auto& mode : modes) p.modes.push_back(to_points(mode));
    return p;
  };
  m.def("min_ade", [make_pred](const std::vector<std::vector<XY>>& modes, const std::vector<XY>& gt) {
    return min_ade(make_pred(modes), to_points(gt));
  });
  m.def("min_fde", [make_pred](const std::vector<std::vector<XY>>& modes, const std::vector<XY>& gt) {
    return min_fde(make_pred(modes), to_points(gt));
  });

  m.def("load_scene", [](const std::string& path) { return load_scene(path); });
  m.def("parse_scene", [](const std::string& text) { return parse_scene(text); });

  m.def("recipes", [] {
    std::vector<std::string> names;
    for (const Recipe r : kAllRecipes) names.emplace_back(to_string(r));
    return names;
  });
  m.def(
      "synth_scene",
      [](const std::string& recipe, std::uint64_t seed, double noise, bool annotate_turns) {
        SynthSpec spec;
        spec.recipe = parse_recipe(recipe);
        spec.seed = seed;
        spec.noise_sigma = noise;
        spec.annotate_turns = annotate_turns;
        SynthScene s = synth_scene(spec);
        return py::make_tuple(std::move(s.scene), label_dict(s.label));
      },
      py::arg("recipe"), py::arg("seed") = 0, py::arg("noise") = 0.0, py::arg("annotate_turns") = false);

  m.def(
      "run_extract",
      [](const std::vector<SceneFile>& scenes, std::size_t workers, bool all_agents, const std::string& fmt) {
        Config cfg;
        cfg.workers = workers;
        cfg.all_agents = all_agents;
        const auto format = fmt == "json" ? OutputFormat::Json : OutputFormat::Csv;
        std::vector<ExtractRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_extract(scenes, cfg);
        }
        return format_extract(rows, format);
      },
      py::arg("scenes"), py::arg("workers") = 1, py::arg("all_agents") = false, py::arg("format") = "csv");

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
}
