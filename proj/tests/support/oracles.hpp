#pragma once

// Naive reference implementations the library is checked against. None of
// these call into the library's own geometry or search code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lanetrace/geometry.hpp"
#include "lanetrace/lane_graph.hpp"
#include "lanetrace/matching.hpp"

namespace oracle {

using lanetrace::Point2;

// Minimum distance to points sampled along the polyline every `step` meters.
inline double dense_distance(Point2 p, const std::vector<Point2>& line, double step = 1e-3) {
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double x, double y) { best = std::min(best, std::hypot(p.x - x, p.y - y)); };
  if (line.size() == 1) consider(line[0].x, line[0].y);
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double dx = line[i + 1].x - line[i].x;
    const double dy = line[i + 1].y - line[i].y;
    const double len = std::hypot(dx, dy);
    const auto n = static_cast<std::size_t>(std::ceil(len / step));
    for (std::size_t k = 0; k <= n; ++k) {
      const double s = n == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(n);
      consider(line[i].x + s * dx, line[i].y + s * dy);
    }
  }
  return best;
}

// 1 / circumradius through Heron's area, 0 for degenerate triples.
inline double circumcurvature(Point2 a, Point2 b, Point2 c) {
  const double la = std::hypot(b.x - c.x, b.y - c.y);
  const double lb = std::hypot(a.x - c.x, a.y - c.y);
  const double lc = std::hypot(a.x - b.x, a.y - b.y);
  const double s = 0.5 * (la + lb + lc);
  const double area2 = s * (s - la) * (s - lb) * (s - lc);
  if (area2 <= 0.0 || la * lb * lc == 0.0) return 0.0;
  return 4.0 * std::sqrt(area2) / (la * lb * lc);
}

inline double max_circumcurvature(const std::vector<Point2>& line) {
  double best = 0.0;
  for (std::size_t i = 0; i + 2 < line.size(); ++i) best = std::max(best, circumcurvature(line[i], line[i + 1], line[i + 2]));
  return best;
}

// Heading change as the argument of exit / entry direction in the complex plane.
inline double heading_change(Point2 entry, Point2 exit) {
  const std::complex<double> a(entry.x, entry.y);
  const std::complex<double> b(exit.x, exit.y);
  return std::arg(b / a);
}

inline double ade(const std::vector<Point2>& mode, const std::vector<Point2>& gt) {
  double sum = 0.0;
  for (std::size_t t = 0; t < gt.size(); ++t) sum += std::hypot(mode[t].x - gt[t].x, mode[t].y - gt[t].y);
  return sum / static_cast<double>(gt.size());
}

inline double min_ade(const std::vector<std::vector<Point2>>& modes, const std::vector<Point2>& gt) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : modes) best = std::min(best, ade(m, gt));
  return best;
}

inline double min_fde(const std::vector<std::vector<Point2>>& modes, const std::vector<Point2>& gt) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : modes) best = std::min(best, std::hypot(m.back().x - gt.back().x, m.back().y - gt.back().y));
  return best;
}

// Connectivity read straight off the segment records.
inline bool linked(const lanetrace::LaneGraph& g, const std::string& from, const std::string& to) {
  const auto& s = g.at(from);
  if (std::find(s.successors.begin(), s.successors.end(), to) != s.successors.end()) return true;
  return s.left_neighbor == to || s.right_neighbor == to;
}

using Path = std::vector<std::size_t>;

// Every simple path over the interval list that starts at t = 0 and whose
// last interval covers T - 1, by plain recursion over all interval pairs.
inline std::set<Path> all_paths(const std::vector<lanetrace::AssignmentInterval>& iv, const lanetrace::LaneGraph& g, int T) {
  std::set<Path> out;
  Path path;
  std::vector<bool> used(iv.size(), false);
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    path.push_back(i);
    used[i] = true;
    if (iv[i].start <= T - 1 && T - 1 <= iv[i].end) out.insert(path);
    for (std::size_t j = 0; j < iv.size(); ++j) {
      if (used[j]) continue;
      if (iv[j].start < iv[i].start || iv[j].start > iv[i].end + 1) continue;
      if (!linked(g, iv[i].segment, iv[j].segment)) continue;
      walk(j);
    }
    used[i] = false;
    path.pop_back();
  };
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (iv[i].start <= 0 && 0 <= iv[i].end) walk(i);
  }
  return out;
}

// Per-timestep best confidence table averaged over every timestep.
inline double sequence_confidence(const std::vector<lanetrace::AssignmentInterval>& seq,
                                  const std::vector<lanetrace::TimestepAssignment>& recs) {
  double sum = 0.0;
  for (const auto& rec : recs) {
    double best = 0.0;
    for (const auto& iv : seq) {
      if (rec.timestep < iv.start || rec.timestep > iv.end) continue;
      for (const auto& e : rec.entries) {
        if (e.segment == iv.segment) best = std::max(best, e.confidence);
      }
    }
    sum += best;
  }
  return recs.empty() ? 0.0 : sum / static_cast<double>(recs.size());
}

// Bin index by direct comparison against every bin's bounds.
inline long bin_index(double v, const std::vector<double>& edges) {
  const std::size_t n = edges.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const bool last = i + 1 == n;
    if (v >= edges[i] && (v < edges[i + 1] || (last && v == edges[i + 1]))) return static_cast<long>(i);
  }
  return -1;
}

}  // namespace oracle
