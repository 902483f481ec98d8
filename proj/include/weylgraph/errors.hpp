#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weylgraph {

// Malformed input text. line() is 1-based; 0 when the input has no lines.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A documented hypothesis of an operation does not hold for its inputs.
class PreconditionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A named hypothesis of a structure theorem fails for the input graph.
class HypothesisError : public PreconditionError {
 public:
  HypothesisError(std::string hypothesis, const std::string& message)
      : PreconditionError(message), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

// A bounded search or refinement reached its configured limit.
class BoundExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An identity that must hold under the operation's hypotheses failed.
class VerificationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace weylgraph
