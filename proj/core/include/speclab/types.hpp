#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <stdexcept>
#include <string>

namespace speclab {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using SpMat = Eigen::SparseMatrix<double>;

inline constexpr const char* kVersion = "0.1.0";

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad config values, malformed files, violated preconditions.
struct ConfigError : Error {
  using Error::Error;
};

/// Mesh construction or validation failure.
struct MeshError : Error {
  using Error::Error;
};

/// Numerical failure: non-convergence, singular factorization, degenerate data.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace speclab
