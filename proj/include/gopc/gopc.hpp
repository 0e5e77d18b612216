#pragma once

#include "gopc/exact_sum.hpp"
#include "gopc/mst.hpp"
#include "gopc/parallel.hpp"
#include "gopc/types.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

namespace gopc {

/// Maps a similarity-mode minimax matrix to dissimilarities with
/// d = max_entry - s. Dissimilarity input is returned unchanged.
template <typename Scalar>
MinimaxMatrix<Scalar> to_dissimilarity(const MinimaxMatrix<Scalar>& mm) {
  if (mm.mode == Mode::dissimilarity) return mm;
  MinimaxMatrix<Scalar> out;
  out.mode = Mode::dissimilarity;
  const Scalar top = mm.size() > 0 ? mm.values.maxCoeff() : Scalar(0);
  out.values = (Matrix<Scalar>::Constant(mm.size(), mm.size(), top) - mm.values).eval();
  out.values.diagonal().setZero();
  return out;
}

template <typename Scalar>
struct DegreeTable {
  Vector<Scalar> degrees;
  /// Objects by (degree, index) ascending.
  std::vector<Index> order;
  /// Inverse of `order`.
  std::vector<Index> position;
};

struct NnTable {
  /// Empty only for order[0].
  std::vector<std::optional<Index>> nn;
};

template <typename Scalar>
struct ClusterModel {
  std::vector<Index> medoids;
  /// Nearest medoid per object (first in medoid order on ties).
  std::vector<Index> tau;
  /// Medoid position per object, kNoiseLabel for unresolved noise.
  Partition labels;
  std::vector<bool> noise_flags;
  Scalar objective = 0;
  /// Winning gain of epochs 2..k.
  std::vector<Scalar> gain_trace;

  Index noise_count() const {
    return static_cast<Index>(std::count(noise_flags.begin(), noise_flags.end(), true));
  }
};

enum class Filter { on, off };

enum class NoiseStrategy { separate, mst_merge };

struct RunOptions {
  Filter filter = Filter::on;
  /// Minimum distances within tie_eps of each other count as tied.
  double tie_eps = 0;
};

namespace detail {

template <typename Scalar>
void require_dissimilarity(const MinimaxMatrix<Scalar>& mm) {
  if (mm.mode != Mode::dissimilarity) {
    throw InvalidInput("expected a dissimilarity-mode minimax matrix; convert with to_dissimilarity");
  }
}

}  // namespace detail

/// degree(x) = sum over y of mm(y, x), summed exactly so that equal degrees
/// compare equal.
template <typename Scalar>
DegreeTable<Scalar> compute_degrees(const MinimaxMatrix<Scalar>& mm) {
  detail::require_dissimilarity(mm);
  const Index n = mm.size();
  DegreeTable<Scalar> dt;
  dt.degrees.resize(n);
  parallel_for(0, n, [&](Index x) {
    ExactSum<Scalar> acc;
    for (Index y = 0; y < n; ++y) acc += mm(y, x);
    dt.degrees(x) = acc.value();
  });
  dt.order.resize(static_cast<std::size_t>(n));
  std::iota(dt.order.begin(), dt.order.end(), Index{0});
  std::sort(dt.order.begin(), dt.order.end(), [&](Index a, Index b) {
    return std::tie(dt.degrees(a), a) < std::tie(dt.degrees(b), b);
  });
  dt.position.resize(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < dt.order.size(); ++p) {
    dt.position[static_cast<std::size_t>(dt.order[p])] = static_cast<Index>(p);
  }
  return dt;
}

/// nn(x): nearest object strictly earlier in the degree order; distance
/// ties go to the earliest such object.
template <typename Scalar>
NnTable compute_nn(const DegreeTable<Scalar>& dt, const MinimaxMatrix<Scalar>& mm) {
  const auto n = dt.order.size();
  if (static_cast<Index>(n) != mm.size()) throw InvalidInput("degree table does not match matrix");
  NnTable table;
  table.nn.resize(n);
  parallel_for(1, static_cast<Index>(n), [&](Index p) {
    const Index x = dt.order[static_cast<std::size_t>(p)];
    Index best = dt.order[0];
    Scalar best_d = mm(best, x);
    for (Index q = 1; q < p; ++q) {
      const Index y = dt.order[static_cast<std::size_t>(q)];
      if (mm(y, x) < best_d) {
        best_d = mm(y, x);
        best = y;
      }
    }
    table.nn[static_cast<std::size_t>(x)] = best;
  });
  return table;
}

/// Decrease of the objective if x became a medoid given the current
/// nearest-medoid map: sum over y of max(d(y, tau(y)) - d(y, x), 0).
template <typename Scalar>
Scalar gain(Index x, const std::vector<Index>& tau, const MinimaxMatrix<Scalar>& mm) {
  ExactSum<Scalar> acc;
  const Index n = mm.size();
  for (Index y = 0; y < n; ++y) {
    const Scalar current = mm(y, tau[static_cast<std::size_t>(y)]);
    const Scalar candidate = mm(y, x);
    if (candidate < current) {
      acc += current;
      acc -= candidate;
    }
  }
  return acc.value();
}

template <typename Scalar>
struct MedoidSelection {
  std::vector<Index> medoids;
  std::vector<Index> tau;
  std::vector<Scalar> gain_trace;
};

/// The greedy epoch loop. m_1 = order[0]; every later epoch takes the
/// candidate with the largest gain, earliest in degree order on ties. With
/// Filter::on only objects whose nn is already a medoid are candidates.
template <typename Scalar>
MedoidSelection<Scalar> select_medoids(const MinimaxMatrix<Scalar>& mm,
                                       const DegreeTable<Scalar>& dt, const NnTable& nnt,
                                       Index k, Filter filter) {
  detail::require_dissimilarity(mm);
  const Index n = mm.size();
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (k > n) {
    throw InvalidInput("k = " + std::to_string(k) + " exceeds the number of objects (" +
                       std::to_string(n) + ")");
  }
  MedoidSelection<Scalar> sel;
  std::vector<char> is_medoid(static_cast<std::size_t>(n), 0);
  const Index first = dt.order.front();
  sel.medoids.push_back(first);
  is_medoid[static_cast<std::size_t>(first)] = 1;
  sel.tau.assign(static_cast<std::size_t>(n), first);

  std::vector<Index> candidates;
  std::vector<Scalar> gains;
  for (Index t = 2; t <= k; ++t) {
    candidates.clear();
    for (const Index x : dt.order) {
      if (is_medoid[static_cast<std::size_t>(x)]) continue;
      if (filter == Filter::on) {
        const auto& nn = nnt.nn[static_cast<std::size_t>(x)];
        if (!nn || !is_medoid[static_cast<std::size_t>(*nn)]) continue;
      }
      candidates.push_back(x);
    }
    // The earliest non-medoid in degree order always passes the filter, so
    // candidates is never empty here.
    gains.assign(candidates.size(), Scalar(0));
    parallel_for(0, static_cast<Index>(candidates.size()), [&](Index c) {
      gains[static_cast<std::size_t>(c)] = gain(candidates[static_cast<std::size_t>(c)], sel.tau, mm);
    }, 8);
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
      if (gains[c] > gains[best]) best = c;
    }
    const Index chosen = candidates[best];
    sel.medoids.push_back(chosen);
    sel.gain_trace.push_back(gains[best]);
    is_medoid[static_cast<std::size_t>(chosen)] = 1;
    for (Index y = 0; y < n; ++y) {
      auto& ty = sel.tau[static_cast<std::size_t>(y)];
      if (mm(y, chosen) < mm(y, ty)) ty = chosen;
    }
  }
  return sel;
}

template <typename Scalar>
struct Assignment {
  Partition labels;
  std::vector<bool> noise_flags;
  std::vector<Index> tau;
};

/// Labels each object with the position of its unique nearest medoid.
/// Objects whose minimum is shared (within tie_eps) by two or more medoids
/// are flagged noise and labeled kNoiseLabel; medoids are never noise.
template <typename Scalar>
Assignment<Scalar> assign(const MinimaxMatrix<Scalar>& mm, const std::vector<Index>& medoids,
                          double tie_eps = 0) {
  if (medoids.empty()) throw InvalidInput("at least one medoid is required");
  const Index n = mm.size();
  std::vector<int> medoid_slot(static_cast<std::size_t>(n), -1);
  for (std::size_t t = 0; t < medoids.size(); ++t) {
    auto& slot = medoid_slot[static_cast<std::size_t>(medoids[t])];
    if (slot >= 0) throw InvalidInput("medoids must be distinct");
    slot = static_cast<int>(t);
  }

  Assignment<Scalar> out;
  out.labels.resize(static_cast<std::size_t>(n));
  out.noise_flags.assign(static_cast<std::size_t>(n), false);
  out.tau.resize(static_cast<std::size_t>(n));
  for (Index x = 0; x < n; ++x) {
    const auto sx = static_cast<std::size_t>(x);
    if (medoid_slot[sx] >= 0) {
      out.labels[sx] = medoid_slot[sx];
      out.tau[sx] = x;
      continue;
    }
    std::size_t best = 0;
    for (std::size_t t = 1; t < medoids.size(); ++t) {
      if (mm(x, medoids[t]) < mm(x, medoids[best])) best = t;
    }
    const Scalar lowest = mm(x, medoids[best]);
    int tied = 0;
    for (const Index m : medoids) {
      if (mm(x, m) <= lowest + static_cast<Scalar>(tie_eps)) ++tied;
    }
    out.tau[sx] = medoids[best];
    if (tied > 1) {
      out.noise_flags[sx] = true;
      out.labels[sx] = kNoiseLabel;
    } else {
      out.labels[sx] = static_cast<int>(best);
    }
  }
  return out;
}

/// Sum over labeled objects of the distance to their cluster's medoid, plus
/// each unlabeled noise object's nearest-medoid distance.
template <typename Scalar>
Scalar objective_of(const MinimaxMatrix<Scalar>& mm, const ClusterModel<Scalar>& model) {
  ExactSum<Scalar> acc;
  for (std::size_t x = 0; x < model.labels.size(); ++x) {
    const int label = model.labels[x];
    const Index m = label >= 0 ? model.medoids[static_cast<std::size_t>(label)] : model.tau[x];
    acc += mm(static_cast<Index>(x), m);
  }
  return acc.value();
}

/// Degrees, nn table, medoid selection and assignment in one call. A
/// similarity-mode matrix is converted first.
template <typename Scalar>
ClusterModel<Scalar> run(const MinimaxMatrix<Scalar>& input, Index k, RunOptions options = {}) {
  const MinimaxMatrix<Scalar> mm = to_dissimilarity(input);
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (k > mm.size()) {
    throw InvalidInput("k = " + std::to_string(k) + " exceeds the number of objects (" +
                       std::to_string(mm.size()) + ")");
  }
  const auto dt = compute_degrees(mm);
  const auto nnt = compute_nn(dt, mm);
  auto sel = select_medoids(mm, dt, nnt, k, options.filter);
  auto assigned = assign(mm, sel.medoids, options.tie_eps);

  ClusterModel<Scalar> model;
  model.medoids = std::move(sel.medoids);
  model.tau = std::move(assigned.tau);
  model.labels = std::move(assigned.labels);
  model.noise_flags = std::move(assigned.noise_flags);
  model.gain_trace = std::move(sel.gain_trace);
  model.objective = objective_of(mm, model);
  return model;
}

/// separate: noise objects keep kNoiseLabel.
/// mst_merge: tree edges touching a noise object are consumed lightest
/// first (strongest first in similarity mode, then by endpoint indices);
/// an unresolved endpoint joins the cluster of a resolved one. Edges with
/// two unresolved endpoints wait until one of them resolves. The objective
/// is recomputed over the final labels.
///
/// `mm` must be the dissimilarity-mode matrix the model was built from.
template <typename Scalar>
ClusterModel<Scalar> resolve_noise(ClusterModel<Scalar> model, NoiseStrategy strategy,
                                   const SpanningTree<Scalar>& tree,
                                   const MinimaxMatrix<Scalar>& mm) {
  detail::require_dissimilarity(mm);
  if (model.noise_count() == 0 || strategy == NoiseStrategy::separate) {
    for (std::size_t x = 0; x < model.labels.size(); ++x) {
      if (model.noise_flags[x]) model.labels[x] = kNoiseLabel;
    }
    model.objective = objective_of(mm, model);
    return model;
  }
  const auto n = model.labels.size();
  if (tree.n != static_cast<Index>(n)) throw InvalidInput("tree does not match the model");
  if (model.noise_count() == static_cast<Index>(n)) {
    throw InvalidInput("cannot merge noise: every object is noise");
  }

  struct Pending {
    Scalar w;
    Index a;
    Index b;
  };
  const Mode mode = tree.mode;
  auto after = [mode](const Pending& p, const Pending& q) {
    // priority_queue pops the greatest element; "greatest" = consumed first.
    if (p.w != q.w) return detail::better(mode, q.w, p.w);
    return std::tie(p.a, p.b) > std::tie(q.a, q.b);
  };
  std::priority_queue<Pending, std::vector<Pending>, decltype(after)> lambda(after);
  for (const auto& e : tree.edges) {
    if (model.noise_flags[static_cast<std::size_t>(e.u)] ||
        model.noise_flags[static_cast<std::size_t>(e.v)]) {
      lambda.push({e.w, std::min(e.u, e.v), std::max(e.u, e.v)});
    }
  }

  std::vector<char> resolved(n);
  for (std::size_t x = 0; x < n; ++x) resolved[x] = model.noise_flags[x] ? 0 : 1;
  std::vector<Pending> deferred;
  while (!lambda.empty()) {
    const Pending e = lambda.top();
    lambda.pop();
    const auto a = static_cast<std::size_t>(e.a);
    const auto b = static_cast<std::size_t>(e.b);
    if (resolved[a] && resolved[b]) continue;
    if (!resolved[a] && !resolved[b]) {
      deferred.push_back(e);
      continue;
    }
    const std::size_t from = resolved[a] ? a : b;
    const std::size_t to = resolved[a] ? b : a;
    model.labels[to] = model.labels[from];
    model.tau[to] = model.medoids[static_cast<std::size_t>(model.labels[to])];
    resolved[to] = 1;
    for (const auto& d : deferred) lambda.push(d);
    deferred.clear();
  }
  if (!deferred.empty()) throw InvalidInput("noise objects unreachable through the tree");
  model.objective = objective_of(mm, model);
  return model;
}

}  // namespace gopc
