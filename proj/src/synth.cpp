#include "gopc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace gopc {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct Builder {
  explicit Builder(Index n) {
    ps.points.resize(n, 2);
    ps.labels.emplace();
    ps.labels->reserve(static_cast<std::size_t>(n));
  }

  void add(double x, double y, int label) {
    const auto row = static_cast<Index>(ps.labels->size());
    ps.points(row, 0) = x;
    ps.points(row, 1) = y;
    ps.labels->push_back(label);
  }

  PointSet<double> ps;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidInput(message);
}

PointSet<double> grid_blobs(const GenSpec& spec, const std::vector<Index>& counts,
                            std::mt19937_64& rng) {
  const auto c = static_cast<Index>(counts.size());
  const auto cols = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(c))));
  std::normal_distribution<double> noise(0.0, effective_spread(spec));
  Builder b(spec.n);
  for (Index j = 0; j < c; ++j) {
    const double cx = static_cast<double>(j % cols) * spec.separation;
    const double cy = static_cast<double>(j / cols) * spec.separation;
    for (Index i = 0; i < counts[static_cast<std::size_t>(j)]; ++i) {
      const double x = cx + noise(rng);
      const double y = cy + noise(rng);
      b.add(x, y, static_cast<int>(j));
    }
  }
  return std::move(b.ps);
}

PointSet<double> circles(const GenSpec& spec, std::mt19937_64& rng) {
  const auto counts =
      proportional_counts(spec.n, std::vector<double>(spec.radii.size(), 1.0));
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::normal_distribution<double> noise(0.0, effective_spread(spec));
  Builder b(spec.n);
  for (std::size_t j = 0; j < spec.radii.size(); ++j) {
    for (Index i = 0; i < counts[j]; ++i) {
      const double theta = angle(rng);
      const double r = spec.radii[j] + noise(rng);
      b.add(r * std::cos(theta), r * std::sin(theta), static_cast<int>(j));
    }
  }
  return std::move(b.ps);
}

PointSet<double> spiral(const GenSpec& spec, std::mt19937_64& rng) {
  const auto counts =
      proportional_counts(spec.n, std::vector<double>(static_cast<std::size_t>(spec.components), 1.0));
  std::normal_distribution<double> noise(0.0, effective_spread(spec));
  const double start = std::numbers::pi;
  const double sweep = kTwoPi * spec.turns;
  Builder b(spec.n);
  for (Index j = 0; j < spec.components; ++j) {
    const double phase = kTwoPi * static_cast<double>(j) / static_cast<double>(spec.components);
    const Index m = counts[static_cast<std::size_t>(j)];
    for (Index i = 0; i < m; ++i) {
      const double s = m > 1 ? static_cast<double>(i) / static_cast<double>(m - 1) : 0.0;
      const double theta = start + sweep * s;
      const double x = theta * std::cos(theta + phase) + noise(rng);
      const double y = theta * std::sin(theta + phase) + noise(rng);
      b.add(x, y, static_cast<int>(j));
    }
  }
  return std::move(b.ps);
}

PointSet<double> line_clusters(const GenSpec& spec, std::mt19937_64& rng) {
  const auto counts =
      proportional_counts(spec.n, std::vector<double>(static_cast<std::size_t>(spec.components), 1.0));
  std::uniform_real_distribution<double> along(0.0, spec.length);
  std::normal_distribution<double> noise(0.0, effective_spread(spec));
  Builder b(spec.n);
  for (Index j = 0; j < spec.components; ++j) {
    const double y0 = static_cast<double>(j) * spec.separation;
    for (Index i = 0; i < counts[static_cast<std::size_t>(j)]; ++i) {
      const double x = along(rng) + noise(rng);
      const double y = y0 + noise(rng);
      b.add(x, y, static_cast<int>(j));
    }
  }
  return std::move(b.ps);
}

}  // namespace

std::optional<Family> parse_family(std::string_view name) {
  if (name == "blobs") return Family::blobs;
  if (name == "circles") return Family::circles;
  if (name == "spiral") return Family::spiral;
  if (name == "unbalance") return Family::unbalance;
  if (name == "line_clusters" || name == "lines") return Family::line_clusters;
  return std::nullopt;
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::blobs: return "blobs";
    case Family::circles: return "circles";
    case Family::spiral: return "spiral";
    case Family::unbalance: return "unbalance";
    case Family::line_clusters: return "line_clusters";
  }
  return "unknown";
}

double effective_spread(const GenSpec& spec) {
  if (spec.spread) return *spec.spread;
  switch (spec.family) {
    case Family::circles:
    case Family::spiral: return 0.05;
    case Family::line_clusters: return 0.1;
    default: return 1.0;
  }
}

std::vector<Index> proportional_counts(Index n, const std::vector<double>& weights) {
  require(!weights.empty(), "at least one component is required");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  require(total > 0, "component weights must be positive");
  std::vector<Index> counts(weights.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  Index assigned = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double exact = static_cast<double>(n) * weights[j] / total;
    counts[j] = static_cast<Index>(std::floor(exact));
    assigned += counts[j];
    remainders.emplace_back(exact - std::floor(exact), j);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) {
    ++counts[remainders[r % remainders.size()].second];
  }
  return counts;
}

PointSet<double> generate(const GenSpec& spec) {
  const double spread = effective_spread(spec);
  require(std::isfinite(spread) && spread >= 0, "spread must be a finite non-negative number");
  require(std::isfinite(spec.separation) && spec.separation >= 0,
          "separation must be a finite non-negative number");

  Index components = spec.components;
  switch (spec.family) {
    case Family::circles:
      require(!spec.radii.empty(), "circles need at least one radius");
      for (const double r : spec.radii) require(std::isfinite(r) && r > 0, "radii must be positive");
      components = static_cast<Index>(spec.radii.size());
      break;
    case Family::unbalance:
      require(!spec.sizes.empty(), "unbalance needs at least one class size");
      for (const double s : spec.sizes) require(std::isfinite(s) && s > 0, "class sizes must be positive");
      components = static_cast<Index>(spec.sizes.size());
      break;
    case Family::spiral:
      require(std::isfinite(spec.turns) && spec.turns > 0, "turns must be positive");
      break;
    case Family::line_clusters:
      require(std::isfinite(spec.length) && spec.length > 0, "length must be positive");
      break;
    case Family::blobs:
      break;
  }
  require(components >= 1, "at least one component is required");
  require(spec.n >= components, "n = " + std::to_string(spec.n) + " is below the minimum of " +
                                    std::to_string(components) + " for this family");

  std::mt19937_64 rng(spec.seed);
  switch (spec.family) {
    case Family::blobs:
      return grid_blobs(spec, proportional_counts(spec.n, std::vector<double>(static_cast<std::size_t>(components), 1.0)), rng);
    case Family::unbalance: {
      auto counts = proportional_counts(spec.n, spec.sizes);
      for (const Index c : counts) require(c >= 1, "n too small: a class would be empty");
      return grid_blobs(spec, counts, rng);
    }
    case Family::circles: return circles(spec, rng);
    case Family::spiral: return spiral(spec, rng);
    case Family::line_clusters: return line_clusters(spec, rng);
  }
  throw InvalidInput("unknown family");
}

}  // namespace gopc
