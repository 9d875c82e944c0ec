#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace rwreset {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Malformed textual input (edge lists, CSV weights, config files).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that parses but violates a structural requirement
/// (disconnected or bipartite graph, unnormalized probabilities, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-domain parameters passed by the caller.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested quantity does not exist in the current numerical regime
/// (defective limits, p = 0 singularities, non-converging series, all-censored
/// Monte Carlo runs).
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rwreset
