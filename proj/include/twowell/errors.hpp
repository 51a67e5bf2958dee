#pragma once

#include <stdexcept>
#include <string>

namespace twowell {

/// Argument outside the mathematical domain of an operation (singular matrix,
/// non-SPD well, point outside the window, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input sits exactly on a degenerate special case (e.g. F = Id for the
/// rank-one decomposition).
class DegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Two fields that must share a grid do not.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid too small or too coarse for the requested configuration.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A diagnostic probe was called outside the hypotheses it is valid under.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough data to fit a scaling exponent.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deformation lost orientation (det grad v <= 0) on some cell.
class OrientationError : public DomainError {
 public:
  OrientationError(const std::string& what, int cell_i, int cell_j)
      : DomainError(what), i(cell_i), j(cell_j) {}
  int i;
  int j;
};

}  // namespace twowell
