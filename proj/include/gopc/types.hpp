#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gopc {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Whether matrix entries measure how far apart (dissimilarity) or how alike
/// (similarity) two objects are.
enum class Mode { dissimilarity, similarity };

/// Thrown for malformed or inconsistent inputs.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown for file system failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n objects as rows of an n x d coordinate matrix, with optional
/// ground-truth classes.
template <typename Scalar = double>
struct PointSet {
  Matrix<Scalar> points;
  std::optional<std::vector<int>> labels;

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
};

/// Dense symmetric pairwise base dissimilarities (or similarities).
template <typename Scalar = double>
struct DistanceMatrix {
  Matrix<Scalar> values;
  Mode mode = Mode::dissimilarity;

  Index size() const { return values.rows(); }
  Scalar operator()(Index i, Index j) const { return values(i, j); }
};

/// All-pairs minimax (dissimilarity mode) or maximin (similarity mode)
/// path distances. Always an ultrametric.
///
/// In similarity mode the diagonal holds the largest off-diagonal entry so
/// that converting with `max_entry - s` maps it to zero.
template <typename Scalar = double>
struct MinimaxMatrix {
  Matrix<Scalar> values;
  Mode mode = Mode::dissimilarity;

  Index size() const { return values.rows(); }
  Scalar operator()(Index i, Index j) const { return values(i, j); }
};

/// Per-object cluster labels. -1 marks noise.
using Partition = std::vector<int>;

inline constexpr int kNoiseLabel = -1;

inline void validate_square(Index rows, Index cols) {
  if (rows != cols) {
    throw InvalidInput("non-square matrix: " + std::to_string(rows) + " x " +
                       std::to_string(cols));
  }
}

}  // namespace gopc
