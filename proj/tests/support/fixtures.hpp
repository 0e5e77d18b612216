#pragma once

#include "gopc/dataio.hpp"
#include "gopc/gopc.hpp"
#include "gopc/mst.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <string>

namespace gopc::fixtures {

inline PointSet<double> line(std::initializer_list<double> xs) {
  PointSet<double> ps;
  ps.points.resize(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (const double x : xs) ps.points(i++, 0) = x;
  return ps;
}

/// 1-D points {0, 1, 3, 10, 11.5}.
inline PointSet<double> chain() { return line({0, 1, 3, 10, 11.5}); }

/// 1-D points {0, 10, 20}: every minimax distance is 10.
inline PointSet<double> three_chain() { return line({0, 10, 20}); }

inline PointSet<double> from_matrix(const Matrix<double>& points) {
  PointSet<double> ps;
  ps.points = points;
  return ps;
}

inline MinimaxMatrix<double> minimax_of(const PointSet<double>& ps) {
  return minimax_matrix(euclidean_matrix(ps));
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("gopc_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& contents) const {
    const auto p = file(name);
    std::ofstream(p) << contents;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace gopc::fixtures
