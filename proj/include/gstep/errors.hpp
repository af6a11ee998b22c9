#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gstep {

/// Caller broke a documented precondition (bad shape, bad parameter).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input files (CSV, JSON). Carries the offending line when known.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Base for failures of the numerics themselves.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public NumericalError {
 public:
  explicit NotPositiveDefinite(Eigen::Index pivot)
      : NumericalError("matrix is not positive definite (pivot " + std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  Eigen::Index pivot() const noexcept { return pivot_; }

 private:
  Eigen::Index pivot_;
};

class DegenerateResidual : public NumericalError {
 public:
  explicit DegenerateResidual(Eigen::Index node)
      : NumericalError("residual of node " + std::to_string(node) +
                       " vanishes; diagonal precision is undefined"),
        node_(node) {}
  Eigen::Index node() const noexcept { return node_; }

 private:
  Eigen::Index node_;
};

class CycleDetected : public NumericalError {
 public:
  explicit CycleDetected(std::size_t iteration, const std::string& trace_tail = {})
      : NumericalError("stepwise search revisited a previous edge set at iteration " +
                       std::to_string(iteration) + trace_tail),
        iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class IterationLimit : public NumericalError {
 public:
  explicit IterationLimit(std::size_t limit, const std::string& trace_tail = {})
      : NumericalError("stepwise search hit the iteration limit " + std::to_string(limit) +
                       trace_tail),
        limit_(limit) {}
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

}  // namespace gstep
