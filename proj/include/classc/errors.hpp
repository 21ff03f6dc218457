#pragma once

#include <stdexcept>
#include <string>

namespace classc {

/// Bad argument to a library operation (wrong sizes, out-of-range channels, ...).
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A linear solve or other numerical step failed its residual/conditioning contract.
struct NumericalError : std::runtime_error {
  double residual = 0.0;
  explicit NumericalError(const std::string& msg, double res = 0.0)
      : std::runtime_error(msg), residual(res) {}
};

/// A configurable work ceiling (trail count, factorial size) was exceeded.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Not enough data to compute the requested statistic.
struct StatsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The history-dependent walk met a negative conditional weight at a node.
struct NonProbabilisticNodeError : std::runtime_error {
  int node_id = -1;
  double weight = 0.0;
  NonProbabilisticNodeError(const std::string& msg, int node, double w)
      : std::runtime_error(msg), node_id(node), weight(w) {}
};

/// Conditional weight requested on a prefix whose unconditional weight vanishes.
struct DegeneratePrefixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed document (graph/config); carries a line hint when known.
struct ParseError : std::runtime_error {
  int line = -1;
  std::string field;
  ParseError(const std::string& msg, int line_ = -1, std::string field_ = {})
      : std::runtime_error(msg), line(line_), field(std::move(field_)) {}
};

}  // namespace classc
