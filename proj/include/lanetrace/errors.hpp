#pragma once

#include <stdexcept>
#include <string>

namespace lanetrace {

// Invalid parameter values (thresholds, bin edges, unknown recipes).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A query referenced something the lane graph does not contain.
class QueryError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A quantity cannot be computed from the given input (too few samples, shape mismatch).
class UndefinedQuantityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ShapeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace lanetrace
