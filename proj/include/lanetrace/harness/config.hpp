#pragma once

#include <cstddef>
#include <string_view>

#include "lanetrace/maneuver.hpp"
#include "lanetrace/matching.hpp"
#include "lanetrace/metrics.hpp"
#include "lanetrace/sequence.hpp"

namespace lanetrace {

enum class OutputFormat { Csv, Json };

struct Config {
  MatchConfig match;
  TurnInferenceConfig turn;
  GroupingBins bins;
  // Horizon split; defaults follow the 2 s / 3 s setup at 10 Hz.
  int obs_steps = 20;
  int pred_steps = 30;
  std::size_t modes = 6;
  OutputFormat format = OutputFormat::Csv;
  std::size_t workers = 1;
  bool all_agents = false;
  std::size_t sequence_limit = kDefaultSequenceLimit;
  // 0: population standard deviation, 1: sample standard deviation.
  int std_ddof = 0;

  // Throws ConfigError when any component invariant is broken.
  void validate() const;
};

}  // namespace lanetrace
