#pragma once

#include <stdexcept>
#include <string>

namespace tubekit {

/// Operands live on different grids (resolution or domain differ).
class ResolutionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scale that is not a dyadic multiple of the grid pitch.
class InvalidScale : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Domain restrictions (non-dyadic bounds, nonpositive domains, out-of-range cells).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation's hypotheses are not met by the input; the message names the inequality.
class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Collinear or otherwise degenerate point configurations.
class DegenerateConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Geometry the rasterizer does not handle (e.g. a pencil tip inside the domain).
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter sets that violate their own invariants.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tubekit
