#pragma once

#include "gopc/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gopc {

enum class Family { blobs, circles, spiral, unbalance, line_clusters };

std::optional<Family> parse_family(std::string_view name);
std::string_view family_name(Family family);

/// Generator recipe. Fields not used by a family are ignored; an unset
/// `spread` takes the family default (1 for blobs and unbalance, 0.05 for
/// circles and spiral, 0.1 for line_clusters).
///
///  blobs          `components` isotropic Gaussians with std-dev `spread`,
///                 centers on a square grid with spacing `separation`.
///  circles        concentric rings with the given `radii`, radial Gaussian
///                 noise `spread`.
///  spiral         `components` interleaved Archimedean arms r = theta,
///                 `turns` revolutions each, Gaussian noise `spread`.
///  unbalance      grid-placed Gaussian blobs with class sizes proportional
///                 to `sizes`.
///  line_clusters  `components` parallel segments of length `length`,
///                 `separation` apart, Gaussian noise `spread`.
struct GenSpec {
  Family family = Family::blobs;
  Index n = 300;
  std::uint64_t seed = 0;
  Index components = 3;
  std::optional<double> spread;
  double separation = 10.0;
  std::vector<double> radii{1.0, 3.0, 5.0};
  std::vector<double> sizes{2000, 2000, 2000, 100, 100, 100, 100, 100};
  double turns = 1.25;
  double length = 10.0;
};

/// Points with ground-truth labels 0..c-1. Identical specs give identical
/// output.
PointSet<double> generate(const GenSpec& spec);

double effective_spread(const GenSpec& spec);

/// Splits n into parts proportional to weights (largest remainder, ties to
/// the lower index).
std::vector<Index> proportional_counts(Index n, const std::vector<double>& weights);

}  // namespace gopc
