#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace resosc {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual input; line/column are 1-based.
struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : Error(msg + " (line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

struct MissingLevel : Error {
  int level;
  explicit MissingLevel(int level_)
      : Error("missing energy series for level " + std::to_string(level_)),
        level(level_) {}
};

struct InsufficientOrder : Error {
  using Error::Error;
};

// The Pade linear system is rank-deficient; callers may retry with (L-1, M).
struct SingularPadeSystem : Error {
  int rank;
  SingularPadeSystem(const std::string& msg, int rank_)
      : Error(msg + " (rank " + std::to_string(rank_) + ")"), rank(rank_) {}
};

// A denominator root lies within tolerance of the closed positive real axis.
struct PoleOnContour : Error {
  std::complex<double> pole;
  PoleOnContour(const std::string& msg, std::complex<double> pole_)
      : Error(msg), pole(pole_) {}
};

struct QuadratureNotConverged : Error {
  using Error::Error;
};

struct ConvergenceFailure : Error {
  using Error::Error;
};

struct DegreeOverflow : Error {
  using Error::Error;
};

struct NotNormalized : Error {
  using Error::Error;
};

struct DenominatorVanishes : Error {
  using Error::Error;
};

}  // namespace resosc
