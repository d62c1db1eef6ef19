#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace possmc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// All randomness flows through a caller-owned engine of this type.
using Rng = std::mt19937_64;

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

// Matrix expected to be symmetric positive-definite is not.
class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

// Every weight vanished during a filter step; the run cannot continue.
class DegenerateWeights : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

// Values below this threshold are flushed to zero in kernel evaluations.
inline constexpr double kTinyValue = 1e-300;

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace possmc
