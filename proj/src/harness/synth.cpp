#include "lanetrace/harness/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "lanetrace/errors.hpp"

namespace lanetrace {

std::string_view to_string(Recipe r) {
  switch (r) {
    case Recipe::Straight: return "straight";
    case Recipe::LeftTurn: return "left_turn";
    case Recipe::RightTurn: return "right_turn";
    case Recipe::LeftChange: return "left_change";
    case Recipe::RightChange: return "right_change";
    case Recipe::ChangeBoth: return "change_both";
    case Recipe::LeftTurnChange: return "left_turn_change";
    case Recipe::RightTurnChange: return "right_turn_change";
  }
  return "straight";
}

Recipe parse_recipe(std::string_view name) {
  for (const Recipe r : kAllRecipes) {
    if (to_string(r) == name) return r;
  }
  throw ConfigError("unknown recipe '" + std::string(name) + "'");
}

ManeuverLabel expected_label(Recipe r) {
  using T = TurnManeuver;
  using L = LaneChangeManeuver;
  switch (r) {
    case Recipe::Straight: return {T::GoingStraight, L::FollowingLane, 1.0};
    case Recipe::LeftTurn: return {T::TurningLeft, L::FollowingLane, 1.0};
    case Recipe::RightTurn: return {T::TurningRight, L::FollowingLane, 1.0};
    case Recipe::LeftChange: return {T::GoingStraight, L::ChangingLaneLeft, 1.0};
    case Recipe::RightChange: return {T::GoingStraight, L::ChangingLaneRight, 1.0};
    case Recipe::ChangeBoth: return {T::GoingStraight, L::Both, 1.0};
    case Recipe::LeftTurnChange: return {T::TurningLeft, L::ChangingLaneLeft, 1.0};
    case Recipe::RightTurnChange: return {T::TurningRight, L::ChangingLaneRight, 1.0};
  }
  return {};
}

namespace {

std::mt19937_64 seeded_rng(std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{a & 0xffffffffu, a >> 32, b & 0xffffffffu, b >> 32};
  return std::mt19937_64(seq);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

constexpr double kLaneWidth = 3.5;
constexpr double kRoadSegmentLength = 30.0;
constexpr int kRoadSegments = 3;
constexpr double kApproachLength = kRoadSegmentLength * kRoadSegments;
constexpr double kConnectorLength = 20.0;
constexpr double kLeftRadius = 15.0;
constexpr double kRightRadius = 10.0;
constexpr int kArcPoints = 16;
constexpr double kPointSpacing = 5.0;

Point2 left_normal(Point2 dir) { return {-dir.y, dir.x}; }

std::vector<Point2> line(Point2 a, Point2 b) {
  const int pieces = std::max(1, static_cast<int>(std::ceil(distance(a, b) / kPointSpacing)));
  std::vector<Point2> pts;
  for (int i = 0; i <= pieces; ++i) pts.push_back(a + (static_cast<double>(i) / pieces) * (b - a));
  return pts;
}

std::vector<Point2> arc(Point2 center, double radius, double from, double to) {
  std::vector<Point2> pts;
  for (int i = 0; i < kArcPoints; ++i) {
    const double a = from + (to - from) * i / (kArcPoints - 1);
    Point2 p{center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
    // cos(pi / 2) is not exactly 0; keep joints with straight roads exact.
    if (std::abs(p.x) < 1e-9) p.x = 0.0;
    if (std::abs(p.y) < 1e-9) p.y = 0.0;
    pts.push_back(p);
  }
  return pts;
}

std::string road_id(const std::string& road, int lane, int seg) {
  return road + "_l" + std::to_string(lane) + "_s" + std::to_string(seg);
}

void link(std::vector<LaneSegment>& segs, const std::string& from, const std::string& to) {
  for (auto& s : segs) {
    if (s.id == from) s.successors.push_back(to);
    if (s.id == to) s.predecessors.push_back(from);
  }
}

// Two-lane road; lane 1 lies left of lane 0.
void add_road(std::vector<LaneSegment>& segs, const std::string& name, Point2 start, Point2 dir) {
  const Point2 normal = left_normal(dir);
  for (int lane = 0; lane < 2; ++lane) {
    for (int k = 0; k < kRoadSegments; ++k) {
      LaneSegment s;
      s.id = road_id(name, lane, k);
      const Point2 a = start + (lane * kLaneWidth) * normal + (k * kRoadSegmentLength) * dir;
      s.centerline = line(a, a + kRoadSegmentLength * dir);
      s.left_neighbor = lane == 0 ? std::optional(road_id(name, 1, k)) : std::nullopt;
      s.right_neighbor = lane == 1 ? std::optional(road_id(name, 0, k)) : std::nullopt;
      segs.push_back(std::move(s));
    }
  }
  for (int lane = 0; lane < 2; ++lane) {
    for (int k = 0; k + 1 < kRoadSegments; ++k) link(segs, road_id(name, lane, k), road_id(name, lane, k + 1));
  }
}

std::vector<LaneSegment> intersection_map(bool annotate) {
  using std::numbers::pi;
  std::vector<LaneSegment> segs;
  add_road(segs, "app", {-kApproachLength, 0.0}, {1.0, 0.0});

  for (int lane = 0; lane < 2; ++lane) {
    LaneSegment s;
    s.id = "str_l" + std::to_string(lane);
    s.centerline = line({0.0, lane * kLaneWidth}, {kConnectorLength, lane * kLaneWidth});
    s.left_neighbor = lane == 0 ? std::optional<std::string>("str_l1") : std::nullopt;
    s.right_neighbor = lane == 1 ? std::optional<std::string>("str_l0") : std::nullopt;
    segs.push_back(std::move(s));
  }
  add_road(segs, "east", {kConnectorLength, 0.0}, {1.0, 0.0});

  LaneSegment lt;
  lt.id = "lt";
  lt.centerline = arc({0.0, kLaneWidth + kLeftRadius}, kLeftRadius, -pi / 2, 0.0);
  segs.push_back(std::move(lt));
  add_road(segs, "north", {kLeftRadius, kLaneWidth + kLeftRadius}, {0.0, 1.0});

  LaneSegment rt;
  rt.id = "rt";
  rt.centerline = arc({0.0, -kRightRadius}, kRightRadius, pi / 2, 0.0);
  segs.push_back(std::move(rt));
  add_road(segs, "south", {kRightRadius, -kRightRadius}, {0.0, -1.0});

  const int last = kRoadSegments - 1;
  for (int lane = 0; lane < 2; ++lane) {
    link(segs, road_id("app", lane, last), "str_l" + std::to_string(lane));
    link(segs, "str_l" + std::to_string(lane), road_id("east", lane, 0));
  }
  link(segs, road_id("app", 1, last), "lt");
  link(segs, "lt", road_id("north", 0, 0));
  link(segs, road_id("app", 0, last), "rt");
  link(segs, "rt", road_id("south", 0, 0));

  if (annotate) {
    for (auto& s : segs) {
      s.turn_direction = s.id == "lt"   ? TurnDirection::Left
                         : s.id == "rt" ? TurnDirection::Right
                                        : TurnDirection::None;
    }
  }
  return segs;
}

// Arc-length parameterized polyline.
class Route {
 public:
  explicit Route(std::vector<Point2> pts) : pts_(std::move(pts)) {
    s_.push_back(0.0);
    for (std::size_t i = 1; i < pts_.size(); ++i) s_.push_back(s_.back() + distance(pts_[i - 1], pts_[i]));
  }

  double length() const { return s_.back(); }

  // Point at arc length s, displaced by `offset` along the left normal.
  Point2 at(double s, double offset) const {
    s = std::clamp(s, 0.0, length());
    std::size_t i = static_cast<std::size_t>(std::upper_bound(s_.begin(), s_.end(), s) - s_.begin());
    i = std::clamp<std::size_t>(i, 1, pts_.size() - 1);
    const Point2 a = pts_[i - 1], b = pts_[i];
    const double piece = s_[i] - s_[i - 1];
    const Point2 dir = (1.0 / piece) * (b - a);
    return a + (s - s_[i - 1]) * dir + offset * left_normal(dir);
  }

 private:
  std::vector<Point2> pts_;
  std::vector<double> s_;
};

Route route_through(const LaneGraph& graph, const std::vector<std::string>& ids) {
  std::vector<Point2> pts;
  for (const auto& id : ids) {
    for (const Point2 p : graph.at(id).centerline) {
      if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    }
  }
  return Route(std::move(pts));
}

std::vector<std::string> straight_ids(int lane) {
  std::vector<std::string> ids;
  for (int k = 0; k < kRoadSegments; ++k) ids.push_back(road_id("app", lane, k));
  ids.push_back("str_l" + std::to_string(lane));
  for (int k = 0; k < kRoadSegments; ++k) ids.push_back(road_id("east", lane, k));
  return ids;
}

std::vector<std::string> turn_ids(bool left) {
  const int lane = left ? 1 : 0;
  std::vector<std::string> ids;
  for (int k = 0; k < kRoadSegments; ++k) ids.push_back(road_id("app", lane, k));
  ids.push_back(left ? "lt" : "rt");
  for (int k = 0; k < kRoadSegments; ++k) ids.push_back(road_id(left ? "north" : "south", 0, k));
  return ids;
}

double smoothstep(double s, double from, double to) {
  if (s <= from) return 0.0;
  if (s >= to) return 1.0;
  const double u = (s - from) / (to - from);
  return u * u * (3.0 - 2.0 * u);
}

struct Drive {
  double s_start = 0.0;
  double distance = 0.0;
  // Lateral offset (left positive) as a function of route arc length.
  std::function<double(double)> offset = [](double) { return 0.0; };
};

class Generator {
 public:
  Generator(const SynthSpec& spec)
      : spec_(spec), rng_(seeded_rng(spec.seed, static_cast<std::uint64_t>(spec.recipe))) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  bool coin() { return uniform(0.0, 1.0) < 0.5; }

  std::vector<Point2> sample(const Route& route, const Drive& drive) {
    const int steps = spec_.timestep_count;
    const double duration = (steps - 1) / spec_.sample_rate;
    double accel = uniform(-1.5, 1.5);
    double v0 = (drive.distance - 0.5 * accel * duration * duration) / duration;
    if (v0 < 0.5 || v0 + accel * duration < 0.5) {
      accel = 0.0;
      v0 = drive.distance / duration;
    }
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(steps));
    for (int t = 0; t < steps; ++t) {
      const double tau = t / spec_.sample_rate;
      const double s = drive.s_start + v0 * tau + 0.5 * accel * tau * tau;
      pts.push_back(route.at(s, drive.offset(s)));
    }
    return pts;
  }

  void add_noise(std::vector<Point2>& pts) {
    if (!(spec_.noise_sigma > 0.0)) return;
    std::normal_distribution<double> n(0.0, spec_.noise_sigma);
    for (auto& p : pts) {
      p.x += n(rng_);
      p.y += n(rng_);
    }
  }

  // Lane change window placed between `pre` and `post` margins on a straight route.
  Drive lane_change(double route_length, double lateral) {
    const double pre = uniform(5.0, 15.0), change = uniform(18.0, 28.0), post = uniform(5.0, 15.0);
    Drive d;
    d.distance = pre + change + post;
    d.s_start = uniform(0.0, route_length - d.distance);
    const double from = d.s_start + pre, to = from + change;
    d.offset = [=](double s) { return lateral * (1.0 - smoothstep(s, from, to)); };
    return d;
  }

  Drive change_both(double route_length, double lateral) {
    const double pre = uniform(4.0, 8.0), c1 = uniform(16.0, 22.0), gap = uniform(3.0, 8.0),
                 c2 = uniform(16.0, 22.0), post = uniform(4.0, 8.0);
    Drive d;
    d.distance = pre + c1 + gap + c2 + post;
    d.s_start = uniform(0.0, route_length - d.distance);
    const double a = d.s_start + pre, b = a + c1, c = b + gap, e = c + c2;
    d.offset = [=](double s) { return lateral * smoothstep(s, a, b) * (1.0 - smoothstep(s, c, e)); };
    return d;
  }

  Drive turn(double arc_end) {
    Drive d;
    const double end = arc_end + uniform(6.0, 20.0);
    d.distance = uniform(30.0, 60.0);
    d.s_start = end - d.distance;
    return d;
  }

  Drive turn_with_change(double arc_end, double lateral) {
    const double change_end = kApproachLength - uniform(5.0, 12.0);
    const double change = uniform(18.0, 24.0);
    const double change_start = change_end - change;
    Drive d;
    d.s_start = change_start - uniform(4.0, 8.0);
    d.distance = arc_end + uniform(6.0, 12.0) - d.s_start;
    d.offset = [=](double s) { return lateral * (1.0 - smoothstep(s, change_start, change_end)); };
    return d;
  }

  SynthScene run() {
    if (spec_.timestep_count < 3) throw ConfigError("synthetic scenes need at least 3 timesteps");
    if (!(spec_.sample_rate > 0.0)) throw ConfigError("sample rate must be positive");
    if (spec_.noise_sigma < 0.0) throw ConfigError("noise sigma must be non-negative");

    SynthScene out;
    SceneFile& scene = out.scene;
    scene.scene_id = "synth-" + std::string(to_string(spec_.recipe)) + "-" + std::to_string(spec_.seed);
    scene.split = "synthetic";
    scene.sample_rate = spec_.sample_rate;
    scene.timestep_count = spec_.timestep_count;
    scene.graph = LaneGraph(intersection_map(spec_.annotate_turns));
    const LaneGraph& g = scene.graph;

    const double left_arc_end = kApproachLength + kLeftRadius * std::numbers::pi / 2;
    const double right_arc_end = kApproachLength + kRightRadius * std::numbers::pi / 2;

    std::optional<Route> route;
    Drive drive;
    switch (spec_.recipe) {
      case Recipe::Straight: {
        route.emplace(route_through(g, straight_ids(coin() ? 1 : 0)));
        drive.distance = uniform(8.0, 80.0);
        drive.s_start = uniform(0.0, route->length() - drive.distance);
        break;
      }
      case Recipe::LeftChange:
        route.emplace(route_through(g, straight_ids(1)));
        drive = lane_change(route->length(), -kLaneWidth);
        break;
      case Recipe::RightChange:
        route.emplace(route_through(g, straight_ids(0)));
        drive = lane_change(route->length(), kLaneWidth);
        break;
      case Recipe::ChangeBoth: {
        // Out and back, starting from either lane.
        const bool from_right = coin();
        route.emplace(route_through(g, straight_ids(from_right ? 0 : 1)));
        drive = change_both(route->length(), from_right ? kLaneWidth : -kLaneWidth);
        break;
      }
      case Recipe::LeftTurn:
        route.emplace(route_through(g, turn_ids(true)));
        drive = turn(left_arc_end);
        break;
      case Recipe::RightTurn:
        route.emplace(route_through(g, turn_ids(false)));
        drive = turn(right_arc_end);
        break;
      case Recipe::LeftTurnChange:
        route.emplace(route_through(g, turn_ids(true)));
        drive = turn_with_change(left_arc_end, -kLaneWidth);
        break;
      case Recipe::RightTurnChange:
        route.emplace(route_through(g, turn_ids(false)));
        drive = turn_with_change(right_arc_end, kLaneWidth);
        break;
    }

    Trajectory target;
    target.agent_id = "target";
    target.sample_rate = spec_.sample_rate;
    target.positions = sample(*route, drive);
    add_noise(target.positions);
    scene.agents.push_back(std::move(target));
    scene.targets.push_back("target");

    if (spec_.background_agent) {
      const Route bg = route_through(g, straight_ids(coin() ? 1 : 0));
      Drive d;
      d.distance = uniform(20.0, 60.0);
      d.s_start = uniform(0.0, bg.length() - d.distance);
      Trajectory other;
      other.agent_id = "background";
      other.sample_rate = spec_.sample_rate;
      other.positions = sample(bg, d);
      scene.agents.push_back(std::move(other));
    }

    out.target = "target";
    out.label = expected_label(spec_.recipe);
    return out;
  }

 private:
  SynthSpec spec_;
  std::mt19937_64 rng_;
};

}  // namespace

SynthScene synth_scene(const SynthSpec& spec) { return Generator(spec).run(); }

SceneFile mirror_scene(const SceneFile& scene) {
  SceneFile out = scene;
  std::vector<LaneSegment> segs(scene.graph.segments().begin(), scene.graph.segments().end());
  for (auto& s : segs) {
    for (auto& p : s.centerline) p.y = -p.y;
    std::swap(s.left_neighbor, s.right_neighbor);
    if (s.turn_direction == TurnDirection::Left) {
      s.turn_direction = TurnDirection::Right;
    } else if (s.turn_direction == TurnDirection::Right) {
      s.turn_direction = TurnDirection::Left;
    }
  }
  out.graph = LaneGraph(std::move(segs));
  for (auto& a : out.agents) {
    for (auto& p : a.positions) p.y = -p.y;
  }
  return out;
}

PredictionSet synth_prediction(const SceneFile& scene, std::string_view agent_id, int obs_steps,
                               int pred_steps, std::size_t modes, std::uint64_t seed) {
  const Trajectory* agent = scene.find_agent(agent_id);
  if (agent == nullptr) throw ConfigError("unknown agent '" + std::string(agent_id) + "'");
  const long long begin = obs_steps - agent->first_timestep;
  if (begin < 0 || begin + pred_steps > static_cast<long long>(agent->positions.size())) {
    throw ConfigError("agent '" + agent->agent_id + "' does not cover the prediction horizon");
  }
  std::mt19937_64 rng = seeded_rng(seed, fnv1a(scene.scene_id));
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  PredictionSet set{scene.scene_id, agent->agent_id, {}};
  for (std::size_t k = 0; k < modes; ++k) {
    // Endpoint drift grows with the mode index; mode 0 stays close to the truth.
    const double spread = 0.5 + 1.5 * static_cast<double>(k);
    const Point2 drift{spread * u(rng), spread * u(rng)};
    Path mode;
    for (int h = 0; h < pred_steps; ++h) {
      const double w = static_cast<double>(h + 1) / pred_steps;
      mode.push_back(agent->positions[static_cast<std::size_t>(begin + h)] + w * drift);
    }
    set.modes.push_back(std::move(mode));
  }
  return set;
}

}  // namespace lanetrace
