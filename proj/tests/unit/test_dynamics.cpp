#include <cmath>
#include <limits>

#include "doctest.h"
#include "generators.hpp"
#include "lanetrace/dynamics.hpp"
#include "lanetrace/errors.hpp"
#include "oracles.hpp"

using namespace lanetrace;

namespace {

Trajectory from_steps(const std::vector<double>& steps, double rate = 10.0) {
  Trajectory t;
  t.agent_id = "x";
  t.sample_rate = rate;
  double x = 0.0;
  t.positions.push_back({0, 0});
  for (double s : steps) {
    x += s;
    t.positions.push_back({x, 0});
  }
  return t;
}

// Positions whose finite-difference speeds are v0, v0 + a*dt, ...
Trajectory ramp(double v0, double v1, double seconds, double rate = 10.0) {
  const int n = static_cast<int>(std::lround(seconds * rate));
  std::vector<double> steps;
  for (int i = 0; i <= n; ++i) steps.push_back((v0 + (v1 - v0) * i / n) / rate);
  return from_steps(steps, rate);
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("average velocity") {
    Trajectory still;
    still.positions.assign(10, Point2{3, 4});
    CHECK(average_velocity(still) == 0.0);
    CHECK(average_velocity(from_steps({1, 1, 1, 1})) == doctest::Approx(10.0));
    CHECK(average_velocity(from_steps({0.5, 1.5})) == doctest::Approx(10.0));
    CHECK_THROWS_AS(average_velocity(from_steps({})), UndefinedQuantityError);
  }

  TEST_CASE("average acceleration") {
    CHECK(average_acceleration(from_steps({1, 1, 1, 1})) == doctest::Approx(0.0));
    CHECK(average_acceleration(ramp(0.0, 8.0, 2.0)) == doctest::Approx(4.0));
    CHECK(average_acceleration(ramp(10.0, 5.0, 2.5)) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(average_acceleration(from_steps({1})), UndefinedQuantityError);
  }

  TEST_CASE("sample rate scales both quantities") {
    CHECK(average_velocity(from_steps({1, 1}, 2.0)) == doctest::Approx(2.0));
    CHECK(average_acceleration(ramp(0.0, 8.0, 2.0, 20.0)) == doctest::Approx(4.0));
  }

  TEST_CASE("time reversal negates the acceleration of a ramp") {
    for (const auto& [v0, v1, sec] : std::vector<std::tuple<double, double, double>>{{0, 8, 2}, {10, 5, 2.5}, {3, 12, 4}}) {
      auto t = ramp(v0, v1, sec);
      auto rev = t;
      std::reverse(rev.positions.begin(), rev.positions.end());
      CHECK(average_acceleration(rev) == doctest::Approx(-average_acceleration(t)).epsilon(1e-12));
    }
  }

  TEST_CASE("rigid motions leave velocity and acceleration unchanged") {
    gen::Rng r(51);
    for (int trial = 0; trial < 200; ++trial) {
      Trajectory t;
      t.positions = gen::polyline(r, 3, 40, 50.0);
      Trajectory moved = t;
      moved.positions = gen::rigid(t.positions, r.uniform(-3.14, 3.14), {r.uniform(-1e3, 1e3), r.uniform(-1e3, 1e3)});
      const double v = average_velocity(t);
      const double a = average_acceleration(t);
      CHECK(std::abs(average_velocity(moved) - v) <= 1e-9 * std::max(1.0, std::abs(v)));
      CHECK(std::abs(average_acceleration(moved) - a) <= 1e-9 * std::max(1.0, std::abs(a)));
    }
  }

  TEST_CASE("max driven curvature") {
    LaneSegment a{"a", {{0, 0}, {5, 0}, {10, 0}}, {}, {}, {}, {}, {}};
    LaneSegment b{"b", {{10, 0}, {15, 0}}, {}, {}, {}, {}, {}};
    LaneSegment c{"c", gen::circle_points(10.0, 16, -1.5, 1.5), {}, {}, {}, {}, {}};
    LaneSegment d{"d", gen::circle_points(20.0, 16, -1.5, 1.5), {}, {}, {}, {}, {}};
    LaneGraph g({a, b, c, d});
    LaneSequence s;
    s.segments = {{"a", 0, 1}, {"b", 2, 3}};
    CHECK(max_driven_curvature(s, g) == 0.0);
    s.segments = {{"c", 0, 9}};
    CHECK(std::abs(max_driven_curvature(s, g) - 0.1) < 1e-9);
    s.segments = {{"a", 0, 1}, {"d", 2, 3}, {"c", 4, 5}};
    CHECK(max_driven_curvature(s, g) ==
          doctest::Approx(std::max({0.0, oracle::max_circumcurvature(d.centerline), oracle::max_circumcurvature(c.centerline)})));
  }

  TEST_CASE("bin edges") {
    CHECK_THROWS_AS(BinEdges({1.0}), ConfigError);
    CHECK_THROWS_AS(BinEdges({1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(BinEdges({2.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(BinEdges({0.0, std::numeric_limits<double>::infinity()}), ConfigError);
    const BinEdges e({0, 4, 8, 12});
    CHECK(e.bin_count() == 3);
    CHECK(e.bin_of(0.0) == 0u);
    CHECK(e.bin_of(4.0) == 1u);
    CHECK(e.bin_of(12.0) == 2u);
    CHECK_FALSE(e.bin_of(12.0000001).has_value());
    CHECK_FALSE(e.bin_of(-0.1).has_value());
    CHECK_FALSE(e.bin_of(std::nan("")).has_value());
  }

  TEST_CASE("histograms") {
    const std::vector<double> edges{0, 4, 8, 12};
    auto h = build_histogram(std::vector<double>{1, 5, 9}, edges);
    CHECK(h.counts == std::vector<std::size_t>{1, 1, 1});
    h = build_histogram(std::vector<double>{4}, edges);
    CHECK(h.counts == std::vector<std::size_t>{0, 1, 0});
    h = build_histogram(std::vector<double>{13}, edges);
    CHECK(h.overflow == 1);
    CHECK(h.total() == 1);
    h = build_histogram(std::vector<double>{-1, 12}, edges);
    CHECK(h.underflow == 1);
    CHECK(h.counts[2] == 1);

    auto other = build_histogram(std::vector<double>{1, 1, 20}, edges);
    h.merge(other);
    CHECK(h.counts == std::vector<std::size_t>{2, 0, 1});
    CHECK(h.overflow == 1);
    CHECK_THROWS(h.merge(build_histogram(std::vector<double>{1}, std::vector<double>{0, 1})));
  }

  TEST_CASE("histogram counts are conserved and match direct bin tests") {
    gen::Rng r(52);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> edges{r.uniform(-10, 0)};
      const int n_edges = r.integer(2, 8);
      while (static_cast<int>(edges.size()) < n_edges) edges.push_back(edges.back() + r.uniform(0.1, 5.0));
      std::vector<double> samples;
      const int n = r.integer(0, 300);
      for (int i = 0; i < n; ++i) {
        samples.push_back(r.coin(0.1) ? edges[r.integer(0, n_edges - 1)] : r.uniform(-20, 30));
      }
      const auto h = build_histogram(samples, edges);
      CHECK(h.total() == samples.size());
      std::vector<std::size_t> want(edges.size() - 1, 0);
      std::size_t under = 0;
      std::size_t over = 0;
      for (double v : samples) {
        const long b = oracle::bin_index(v, edges);
        if (b >= 0) {
          ++want[static_cast<std::size_t>(b)];
        } else if (v < edges.front()) {
          ++under;
        } else {
          ++over;
        }
      }
      CHECK(h.counts == want);
      CHECK(h.underflow == under);
      CHECK(h.overflow == over);
    }
  }

  TEST_CASE("default bins") {
    CHECK(default_bins::velocity().edges == std::vector<double>{0, 4, 8, 12, 16, 20});
    CHECK(default_bins::acceleration().edges == std::vector<double>{-2.5, -1.5, -0.5, 0.5, 1.5, 2.5});
    const auto k = default_bins::curvature().edges;
    REQUIRE(k.size() == 6);
    CHECK(k[0] == 0.0);
    CHECK(k[5] == doctest::Approx(0.25));
  }
}
