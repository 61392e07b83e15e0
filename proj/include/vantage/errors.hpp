#pragma once

#include <stdexcept>
#include <string>

namespace vantage {

/// Malformed configuration or input file (bad schema, missing file, bad value).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Geometrically degenerate input: collinear registration points, parallel
/// cross-product operands, prism base with no area, and the like.
struct DegenerateInput : std::domain_error {
  using std::domain_error::domain_error;
};

/// Vector/chain dimension disagreement.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace vantage
