#pragma once

#include <stdexcept>
#include <string>

namespace dynamite {

// Precondition / configuration violations (bad arguments, malformed input).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A guard refused to run: state space too large, chain not ergodic,
// coloring below the ergodicity floor, and similar.
class GuardRejection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A statistical run produced an unusable result (e.g. a zero ratio in the
// counting pipeline), which signals a mis-specified eigenvalue bound.
class EstimationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace dynamite
