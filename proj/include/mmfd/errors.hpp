#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmfd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidOrder : public Error {
 public:
  explicit InvalidOrder(int m)
      : Error("invalid collocation order m=" + std::to_string(m) +
              " (expected 1 <= m <= 10)"),
        order(m) {}
  int order;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  SingularSystem(std::size_t pivot_index, const std::string& detail)
      : Error("singular system: zero pivot at index " +
              std::to_string(pivot_index) +
              (detail.empty() ? std::string() : " (" + detail + ")")),
        pivot(pivot_index) {}
  std::size_t pivot;
};

/// A nonpositive mass entry (cell measure) at some node.
class DegenerateMesh : public Error {
 public:
  DegenerateMesh(std::size_t node_index, double t, double value)
      : Error("degenerate mesh: nonpositive mass " + std::to_string(value) +
              " at node " + std::to_string(node_index) +
              ", t=" + std::to_string(t)),
        node(node_index),
        time(t) {}
  std::size_t node;
  double time;
};

class TangledMesh : public Error {
 public:
  TangledMesh(const std::string& where, double t)
      : Error("tangled mesh: " + where + ", t=" + std::to_string(t)),
        time(t) {}
  double time;
};

class DegenerateExtrapolation : public Error {
 public:
  using Error::Error;
};

class StepFailure : public Error {
 public:
  StepFailure(std::size_t step_index, const std::string& cause)
      : Error("step " + std::to_string(step_index) + " failed: " + cause),
        step(step_index) {}
  std::size_t step;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

}  // namespace mmfd
