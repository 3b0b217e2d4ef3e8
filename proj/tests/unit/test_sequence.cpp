#include <algorithm>
#include <set>

#include "doctest.h"
#include "generators.hpp"
#include "lanetrace/sequence.hpp"
#include "oracles.hpp"

using namespace lanetrace;

namespace {

LaneSegment seg(std::string id, double y) { return {std::move(id), {{0, y}, {10, y}}, {}, {}, {}, {}, {}}; }

// Index paths of the enumerated sequences, matched back onto the input list.
std::set<oracle::Path> as_paths(const EnumerationResult& res, const std::vector<AssignmentInterval>& iv) {
  std::set<oracle::Path> out;
  for (const auto& s : res.sequences) {
    oracle::Path p;
    for (const auto& node : s.segments) {
      p.push_back(static_cast<std::size_t>(std::find(iv.begin(), iv.end(), node) - iv.begin()));
    }
    out.insert(p);
  }
  return out;
}

std::vector<AssignmentInterval> unique_intervals(std::vector<AssignmentInterval> iv) {
  std::vector<AssignmentInterval> out;
  for (auto& i : iv) {
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
  return out;
}

LaneSequence make_seq(std::vector<AssignmentInterval> iv, std::vector<ConnectivityKind> tr, double conf) {
  LaneSequence s;
  s.segments = std::move(iv);
  s.transitions = std::move(tr);
  s.confidence = conf;
  return s;
}

}  // namespace

TEST_SUITE("sequence") {
  TEST_CASE("single lane covering the horizon") {
    LaneGraph g({seg("A", 0)});
    const std::vector<AssignmentInterval> iv{{"A", 0, 9}};
    const auto res = enumerate_sequences(iv, g, 10);
    CHECK(res.status == EnumerationStatus::Complete);
    REQUIRE(res.sequences.size() == 1);
    CHECK(res.sequences[0].segment_ids() == std::vector<SegmentId>{"A"});
    CHECK(res.sequences[0].transitions.empty());
  }

  TEST_CASE("successor chain") {
    auto a = seg("A", 0);
    auto b = seg("B", 0);
    a.successors = {"B"};
    b.predecessors = {"A"};
    LaneGraph g({a, b});
    const std::vector<AssignmentInterval> iv{{"A", 0, 5}, {"B", 4, 9}};
    const auto res = enumerate_sequences(iv, g, 10);
    REQUIRE(res.sequences.size() == 1);
    CHECK(res.sequences[0].segment_ids() == std::vector<SegmentId>{"A", "B"});
    CHECK(res.sequences[0].transitions == std::vector<ConnectivityKind>{ConnectivityKind::Successor});
    CHECK(as_paths(res, iv) == oracle::all_paths(iv, g, 10));
  }

  TEST_CASE("parallel lane reached by a left change") {
    auto a = seg("A", 0);
    auto c = seg("C", 3.5);
    a.left_neighbor = "C";
    LaneGraph g({a, c});
    const std::vector<AssignmentInterval> iv{{"A", 0, 5}, {"C", 0, 9}};
    const auto res = enumerate_sequences(iv, g, 10);
    std::set<std::vector<SegmentId>> ids;
    for (const auto& s : res.sequences) ids.insert(s.segment_ids());
    CHECK(ids == std::set<std::vector<SegmentId>>{{"C"}, {"A", "C"}});
    CHECK(as_paths(res, iv) == oracle::all_paths(iv, g, 10));
  }

  TEST_CASE("nothing covers the first timestep") {
    LaneGraph g({seg("A", 0)});
    const std::vector<AssignmentInterval> iv{{"A", 2, 9}};
    const auto res = enumerate_sequences(iv, g, 10);
    CHECK(res.status == EnumerationStatus::NoRoot);
    CHECK(res.sequences.empty());
  }

  TEST_CASE("search continues past an interval that already reaches the end") {
    auto a = seg("A", 0);
    auto c = seg("C", 3.5);
    a.left_neighbor = "C";
    LaneGraph g({a, c});
    const std::vector<AssignmentInterval> iv{{"A", 0, 9}, {"C", 5, 9}};
    const auto res = enumerate_sequences(iv, g, 10);
    REQUIRE(res.sequences.size() == 2);
    CHECK(res.sequences[0].segment_ids() == std::vector<SegmentId>{"A"});
    CHECK(res.sequences[1].segment_ids() == std::vector<SegmentId>{"A", "C"});
  }

  TEST_CASE("guard trips on path explosions") {
    // Two lanes linked both ways, flickering every step.
    auto a = seg("A", 0);
    auto b = seg("B", 3.5);
    a.left_neighbor = "B";
    b.right_neighbor = "A";
    LaneGraph g({a, b});
    std::vector<AssignmentInterval> iv;
    const int T = 60;
    for (int t = 0; t < T; t += 2) {
      iv.push_back({"A", t, t + 1 < T ? t + 1 : t});
      iv.push_back({"B", t, t + 1 < T ? t + 1 : t});
    }
    const auto res = enumerate_sequences(iv, g, T, 50);
    CHECK(res.status == EnumerationStatus::GuardTripped);
    CHECK(res.sequences.size() == 50);
  }

  TEST_CASE("enumeration equals the exhaustive oracle on random interval graphs") {
    gen::Rng r(31);
    for (int trial = 0; trial < 300; ++trial) {
      const int width = r.integer(1, 5);
      const int T = r.integer(1, 15);
      const auto g = gen::lane_graph(r, width);
      const auto iv = unique_intervals(gen::intervals(r, width, T, 12));
      const auto res = enumerate_sequences(iv, g, T, 1'000'000);
      const auto want = oracle::all_paths(iv, g, T);
      CHECK(as_paths(res, iv) == want);
      CHECK(res.sequences.size() == want.size());
      for (const auto& s : res.sequences) {
        REQUIRE(s.transitions.size() + 1 == s.segments.size());
        for (std::size_t k = 0; k < s.transitions.size(); ++k) {
          CHECK(s.transitions[k] == connectivity(g, s.segments[k].segment, s.segments[k + 1].segment));
          CHECK(s.transitions[k] != ConnectivityKind::Unconnected);
        }
      }
      CHECK(enumerate_sequences(iv, g, T, 1'000'000).sequences == res.sequences);
    }
  }

  TEST_CASE("removing an inner interval never adds sequences") {
    gen::Rng r(32);
    for (int trial = 0; trial < 200; ++trial) {
      const int width = r.integer(1, 4);
      const int T = r.integer(2, 12);
      const auto g = gen::lane_graph(r, width);
      const auto iv = unique_intervals(gen::intervals(r, width, T, 10));
      const auto full = oracle::all_paths(iv, g, T).size();
      for (std::size_t k = 0; k < iv.size(); ++k) {
        if (iv[k].contains(0) || iv[k].contains(T - 1)) continue;
        auto fewer = iv;
        fewer.erase(fewer.begin() + static_cast<long>(k));
        CHECK(enumerate_sequences(fewer, g, T).sequences.size() <= full);
      }
    }
  }

  TEST_CASE("maneuver confidence") {
    std::vector<TimestepAssignment> recs;
    for (int t = 0; t < 10; ++t) recs.push_back({t, {{"A", 1.0}}});
    auto full = make_seq({{"A", 0, 9}}, {}, 0.0);
    CHECK(maneuver_confidence(full, recs) == 1.0);

    std::vector<TimestepAssignment> half;
    for (int t = 0; t < 10; ++t) half.push_back({t, {{"A", t < 5 ? 1.0 : 0.5}}});
    CHECK(maneuver_confidence(full, half) == doctest::Approx(0.75));

    recs[3].entries.clear();
    CHECK(maneuver_confidence(full, recs) == doctest::Approx(0.9));
    CHECK(maneuver_confidence(make_seq({{"A", 0, 2}, {"A", 4, 9}}, {ConnectivityKind::Successor}, 0.0), recs) ==
          doctest::Approx(0.9));
  }

  TEST_CASE("overlapping segments take the larger confidence") {
    std::vector<TimestepAssignment> recs{{0, {{"A", 0.9}}}, {1, {{"A", 0.6}, {"B", 0.8}}}, {2, {{"B", 0.7}}}};
    const auto s = make_seq({{"A", 0, 1}, {"B", 1, 2}}, {ConnectivityKind::Successor}, 0.0);
    CHECK(maneuver_confidence(s, recs) == doctest::Approx((0.9 + 0.8 + 0.7) / 3.0));
  }

  TEST_CASE("scored confidence equals the per-timestep table oracle") {
    gen::Rng r(33);
    for (int trial = 0; trial < 100; ++trial) {
      const int width = r.integer(1, 4);
      const int T = r.integer(1, 30);
      const auto recs = gen::assignments(r, width, T, 0.6);
      const auto iv = build_intervals(recs);
      const auto g = gen::lane_graph(r, width);
      auto res = enumerate_sequences(iv, g, T);
      score_sequences(res.sequences, recs);
      for (const auto& s : res.sequences) {
        CHECK(s.confidence == doctest::Approx(oracle::sequence_confidence(s.segments, recs)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("select best") {
    const auto hi = make_seq({{"A", 0, 9}}, {}, 0.9);
    const auto lo = make_seq({{"B", 0, 9}}, {}, 0.7);
    CHECK(select_best(std::vector{lo, hi})->segment_ids() == std::vector<SegmentId>{"A"});
    CHECK_FALSE(select_best(std::vector<LaneSequence>{}).has_value());

    const auto straight = make_seq({{"A", 0, 4}, {"B", 5, 9}}, {ConnectivityKind::Successor}, 0.8);
    const auto change = make_seq({{"A", 0, 4}, {"C", 5, 9}}, {ConnectivityKind::LeftNeighbor}, 0.8);
    CHECK(select_best(std::vector{change, straight})->segment_ids() == std::vector<SegmentId>{"A", "B"});

    const auto shorter = make_seq({{"Z", 0, 9}}, {}, 0.8);
    CHECK(select_best(std::vector{straight, shorter})->segment_ids() == std::vector<SegmentId>{"Z"});

    const auto lex_a = make_seq({{"A", 0, 9}}, {}, 0.8);
    const auto lex_b = make_seq({{"B", 0, 9}}, {}, 0.8);
    CHECK(select_best(std::vector{lex_b, lex_a})->segment_ids() == std::vector<SegmentId>{"A"});
  }

  TEST_CASE("lane change count") {
    const auto s = make_seq({{"A", 0, 1}, {"B", 2, 3}, {"C", 4, 5}, {"D", 6, 7}},
                            {ConnectivityKind::LeftNeighbor, ConnectivityKind::Successor, ConnectivityKind::RightNeighbor},
                            0.0);
    CHECK(s.lane_change_count() == 2);
  }
}
