#pragma once

#include "gopc/parallel.hpp"
#include "gopc/types.hpp"

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gopc {

enum class TextFormat { csv, tsv };

/// Reads one object per row. With has_labels the last column is an integer
/// ground-truth class. Blank lines are skipped; errors carry the 1-based
/// line number.
PointSet<double> parse_points(std::istream& in, TextFormat format, bool has_labels);
PointSet<double> load_points(const std::filesystem::path& path, TextFormat format,
                             bool has_labels);

/// Reads n rows of n reals separated by whitespace and/or commas.
/// Asymmetric pairs are averaged; with strict_symmetry a pair differing by
/// more than 1e-9 is rejected instead. The diagonal is forced to zero in
/// dissimilarity mode.
DistanceMatrix<double> parse_matrix(std::istream& in, Mode mode,
                                    bool strict_symmetry = false);
DistanceMatrix<double> load_matrix(const std::filesystem::path& path, Mode mode,
                                   bool strict_symmetry = false);

/// Labels from a partition file ("index,label,noise") or a file with one
/// integer label per line.
Partition parse_labels(std::istream& in);
Partition load_labels(const std::filesystem::path& path);

/// Lines "index,label,noise" with noise as 0/1.
void write_partition(std::ostream& out, const Partition& labels,
                     const std::vector<bool>& noise_flags);
void write_partition(const std::filesystem::path& path, const Partition& labels,
                     const std::vector<bool>& noise_flags);

void write_matrix(std::ostream& out, const Matrix<double>& values);
void write_matrix(const std::filesystem::path& path, const Matrix<double>& values);

/// CSV rows of coordinates, followed by the label column when present.
void write_points(std::ostream& out, const PointSet<double>& ps);
void write_points(const std::filesystem::path& path, const PointSet<double>& ps);

/// Shortest text that round-trips to the same double (at most 17
/// significant digits).
std::string format_real(double value);

template <typename Scalar>
DistanceMatrix<Scalar> euclidean_matrix(const PointSet<Scalar>& ps) {
  const Index n = ps.size();
  const Index d = ps.dim();
  DistanceMatrix<Scalar> dm;
  dm.mode = Mode::dissimilarity;
  dm.values = Matrix<Scalar>::Zero(n, n);
  // Column j holds distances to every i < j; the lower triangle is a copy.
  parallel_for(0, n, [&](Index j) {
    for (Index i = 0; i < j; ++i) {
      Scalar sq = 0;
      for (Index c = 0; c < d; ++c) {
        const Scalar diff = ps.points(i, c) - ps.points(j, c);
        sq += diff * diff;
      }
      dm.values(i, j) = std::sqrt(sq);
    }
  });
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) dm.values(i, j) = dm.values(j, i);
  }
  return dm;
}

}  // namespace gopc
