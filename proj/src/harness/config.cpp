#include "lanetrace/harness/config.hpp"

#include "lanetrace/errors.hpp"

namespace lanetrace {

void Config::validate() const {
  match.validate();
  turn.validate();
  if (obs_steps < 0) throw ConfigError("obs-steps must be non-negative");
  if (pred_steps < 1) throw ConfigError("pred-steps must be at least 1");
  if (modes < 1) throw ConfigError("modes must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (sequence_limit < 1) throw ConfigError("sequence limit must be at least 1");
  if (std_ddof != 0 && std_ddof != 1) throw ConfigError("std estimator must be population (0) or sample (1)");
  for (const BinEdges* e : {&bins.velocity, &bins.acceleration, &bins.curvature}) {
    BinEdges check(e->edges);
  }
}

}  // namespace lanetrace
