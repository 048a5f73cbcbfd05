#ifndef FBSDE_ERRORS_HPP
#define FBSDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fbsde {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A simulated state left the finite range (step too coarse or exploding
// coefficients).
struct NonFiniteState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularDiffusion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidWindow : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ZeroFirstBlock : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EndpointSingularity : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Random Gram matrix too close to singular; the sample is rejected and the
// caller counts it.
struct IllConditionedGram : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankDeficientB : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IllConditionedRegression : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingSolution : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularJacobian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UndefinedCase : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fbsde

#endif  // FBSDE_ERRORS_HPP
