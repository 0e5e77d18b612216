#pragma once

#include "gopc/gopc.hpp"
#include "gopc/types.hpp"

#include <string>
#include <vector>

namespace gopc {

/// Winning gain of each epoch t = 2..k_max.
template <typename Scalar>
struct DecisionTrace {
  Index k_max = 0;
  std::vector<Scalar> values;
};

struct KEstimate {
  Index k = 1;
  /// Set when the trace is all zeros and no cliff exists.
  bool degenerate = false;
};

template <typename Scalar>
DecisionTrace<Scalar> trace(const MinimaxMatrix<Scalar>& input, Index k_max,
                            Filter filter = Filter::on) {
  if (k_max < 2 || k_max > input.size()) {
    throw InvalidInput("k_max must lie in [2, n]; got " + std::to_string(k_max) + " with n = " +
                       std::to_string(input.size()));
  }
  const auto mm = to_dissimilarity(input);
  const auto dt = compute_degrees(mm);
  const auto nnt = compute_nn(dt, mm);
  auto sel = select_medoids(mm, dt, nnt, k_max, filter);
  return {k_max, std::move(sel.gain_trace)};
}

/// Picks the epoch t* in 3..k_max with the largest drop ratio
/// values[t*-2] / (values[t*-1] + eps) and reports k = t* - 1. The first
/// maximum wins.
template <typename Scalar>
KEstimate estimate_k(const DecisionTrace<Scalar>& tr, Scalar eps = Scalar(1e-12)) {
  const auto& v = tr.values;
  if (v.size() < 2) throw InvalidInput("decision trace needs at least two epochs");
  bool all_zero = true;
  for (const Scalar x : v) all_zero = all_zero && x == 0;
  if (all_zero) return {1, true};
  std::size_t best = 1;
  Scalar best_ratio = v[0] / (v[1] + eps);
  for (std::size_t i = 2; i < v.size(); ++i) {
    const Scalar ratio = v[i - 1] / (v[i] + eps);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  // values[i] belongs to epoch i + 2, so the cliff epoch is best + 2.
  return {static_cast<Index>(best) + 1, false};
}

}  // namespace gopc
