#pragma once

#include "gopc/exact_sum.hpp"
#include "gopc/types.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace gopc {

inline constexpr std::uint64_t kOracleSubsetLimit = 1'000'000;

/// C(n, k), saturating at uint64 max.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // result * num / i stays integral; guard the multiplication.
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * num / i;
  }
  return result;
}

template <typename Scalar>
struct OracleResult {
  Scalar best_objective = 0;
  std::vector<std::vector<Index>> best_medoid_sets;
  std::uint64_t evaluated = 0;
};

/// sum over x of min over medoids of mm(x, m), summed exactly.
template <typename Scalar>
Scalar medoid_objective(const MinimaxMatrix<Scalar>& mm, const std::vector<Index>& medoids) {
  ExactSum<Scalar> acc;
  for (Index x = 0; x < mm.size(); ++x) {
    Scalar lowest = mm(x, medoids.front());
    for (const Index m : medoids) lowest = std::min(lowest, mm(x, m));
    acc += lowest;
  }
  return acc.value();
}

/// Exhaustive k-medoids over every k-subset in lexicographic order.
/// Refuses instances with more than kOracleSubsetLimit subsets.
template <typename Scalar>
OracleResult<Scalar> brute_force(const MinimaxMatrix<Scalar>& mm, Index k) {
  const Index n = mm.size();
  if (k < 1 || k > n) throw InvalidInput("k must lie in [1, n]");
  const auto subsets = binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
  if (subsets > kOracleSubsetLimit) {
    throw InvalidInput("exhaustive search over C(" + std::to_string(n) + ", " +
                       std::to_string(k) + ") subsets exceeds the limit of " +
                       std::to_string(kOracleSubsetLimit));
  }

  OracleResult<Scalar> result;
  std::vector<Index> subset(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
  while (true) {
    const Scalar value = medoid_objective(mm, subset);
    ++result.evaluated;
    if (result.best_medoid_sets.empty() || value < result.best_objective) {
      result.best_objective = value;
      result.best_medoid_sets.assign(1, subset);
    } else if (value == result.best_objective) {
      result.best_medoid_sets.push_back(subset);
    }
    // Advance to the next combination.
    Index i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return result;
}

/// Checks that every medoid minimizes the summed distance to the members of
/// its own cluster (objects whose unique nearest medoid it is).
template <typename Scalar>
bool medoids_are_central(const MinimaxMatrix<Scalar>& mm, const std::vector<Index>& medoids) {
  const Index n = mm.size();
  std::vector<std::vector<Index>> members(medoids.size());
  for (Index x = 0; x < n; ++x) {
    std::size_t best = 0;
    int tied = 1;
    for (std::size_t t = 1; t < medoids.size(); ++t) {
      if (mm(x, medoids[t]) < mm(x, medoids[best])) {
        best = t;
        tied = 1;
      } else if (mm(x, medoids[t]) == mm(x, medoids[best])) {
        ++tied;
      }
    }
    bool is_medoid = false;
    for (std::size_t t = 0; t < medoids.size(); ++t) {
      if (medoids[t] == x) {
        members[t].push_back(x);
        is_medoid = true;
      }
    }
    if (!is_medoid && tied == 1) members[best].push_back(x);
  }
  for (std::size_t t = 0; t < medoids.size(); ++t) {
    auto within = [&](Index c) {
      ExactSum<Scalar> acc;
      for (const Index y : members[t]) acc += mm(y, c);
      return acc.value();
    };
    const Scalar own = within(medoids[t]);
    for (const Index x : members[t]) {
      if (within(x) < own) return false;
    }
  }
  return true;
}

}  // namespace gopc
