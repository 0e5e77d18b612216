#pragma once

#include "gopc/exact_sum.hpp"
#include "gopc/parallel.hpp"
#include "gopc/types.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gopc {

template <typename Scalar>
struct Edge {
  Index u;
  Index v;
  Scalar w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Minimum spanning tree (dissimilarity mode) or maximum spanning tree
/// (similarity mode) of the complete graph.
template <typename Scalar = double>
struct SpanningTree {
  Index n = 0;
  Mode mode = Mode::dissimilarity;
  std::vector<Edge<Scalar>> edges;
  std::vector<std::vector<std::pair<Index, Scalar>>> adjacency;

  Scalar total_weight() const {
    ExactSum<Scalar> acc;
    for (const auto& e : edges) acc += e.w;
    return acc.value();
  }
};

namespace detail {

// True when `a` is a strictly better key than `b` for the tree being grown.
template <typename Scalar>
bool better(Mode mode, Scalar a, Scalar b) {
  return mode == Mode::dissimilarity ? a < b : a > b;
}

template <typename Scalar>
Scalar extreme(Mode mode, Scalar a, Scalar b) {
  return mode == Mode::dissimilarity ? std::max(a, b) : std::min(a, b);
}

}  // namespace detail

/// Dense Prim from vertex 0, O(n^2) time and O(n) extra space. Among
/// vertices with equally good keys the smallest index joins first; a
/// vertex's parent changes only on a strictly better edge.
template <typename Scalar>
SpanningTree<Scalar> build_tree(const DistanceMatrix<Scalar>& dm) {
  const Index n = dm.size();
  if (n < 1) throw InvalidInput("spanning tree needs at least one object");
  const Mode mode = dm.mode;

  SpanningTree<Scalar> tree;
  tree.n = n;
  tree.mode = mode;
  tree.edges.reserve(static_cast<std::size_t>(n - 1));
  tree.adjacency.resize(static_cast<std::size_t>(n));

  std::vector<Scalar> key(static_cast<std::size_t>(n));
  std::vector<Index> parent(static_cast<std::size_t>(n), -1);
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);

  auto attach = [&](Index u) {
    in_tree[static_cast<std::size_t>(u)] = 1;
    for (Index v = 0; v < n; ++v) {
      const auto sv = static_cast<std::size_t>(v);
      if (in_tree[sv]) continue;
      const Scalar w = dm(u, v);
      if (parent[sv] < 0 || detail::better(mode, w, key[sv])) {
        key[sv] = w;
        parent[sv] = u;
      }
    }
  };

  attach(0);
  for (Index step = 1; step < n; ++step) {
    Index next = -1;
    for (Index v = 0; v < n; ++v) {
      const auto sv = static_cast<std::size_t>(v);
      if (in_tree[sv]) continue;
      if (next < 0 || detail::better(mode, key[sv], key[static_cast<std::size_t>(next)])) {
        next = v;
      }
    }
    const auto sn = static_cast<std::size_t>(next);
    const Index from = parent[sn];
    const Scalar w = key[sn];
    tree.edges.push_back({from, next, w});
    tree.adjacency[static_cast<std::size_t>(from)].emplace_back(next, w);
    tree.adjacency[sn].emplace_back(from, w);
    attach(next);
  }
  return tree;
}

/// Maximum (minimum in similarity mode) edge weight on the tree path of
/// every pair. One traversal per root, O(n^2) overall.
template <typename Scalar>
MinimaxMatrix<Scalar> minimax_all_pairs(const SpanningTree<Scalar>& tree,
                                        const DistanceMatrix<Scalar>& dm) {
  if (tree.n != dm.size()) {
    throw InvalidInput("tree has " + std::to_string(tree.n) + " nodes, matrix has " +
                       std::to_string(dm.size()));
  }
  const Index n = tree.n;
  const Mode mode = tree.mode;

  Scalar diagonal = 0;
  if (mode == Mode::similarity && !tree.edges.empty()) {
    diagonal = tree.edges.front().w;
    for (const auto& e : tree.edges) diagonal = std::max(diagonal, e.w);
  }

  MinimaxMatrix<Scalar> mm;
  mm.mode = mode;
  mm.values.resize(n, n);
  parallel_for(0, n, [&](Index root) {
    struct Frame {
      Index node;
      Index from;
      Scalar value;
    };
    std::vector<Frame> stack;
    stack.push_back({root, -1, diagonal});
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      mm.values(f.node, root) = f.value;
      for (const auto& [next, w] : tree.adjacency[static_cast<std::size_t>(f.node)]) {
        if (next == f.from) continue;
        stack.push_back({next, f.node, f.node == root ? w : detail::extreme(mode, f.value, w)});
      }
    }
  }, 16);
  return mm;
}

template <typename Scalar>
MinimaxMatrix<Scalar> minimax_matrix(const DistanceMatrix<Scalar>& dm) {
  return minimax_all_pairs(build_tree(dm), dm);
}

struct Triple {
  Index a;
  Index b;
  Index c;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Triples (a, b, c) where d(a,b) exceeds max(d(a,c), d(b,c)) by more than
/// tol (similarity mode: s(a,b) falls below min(s(a,c), s(b,c)) by more
/// than tol). Exhaustive up to n = 200, otherwise `samples` random triples
/// drawn with a fixed seed.
template <typename Scalar>
std::vector<Triple> verify_ultrametric(const MinimaxMatrix<Scalar>& mm, Scalar tol = 0,
                                       std::size_t samples = 100000,
                                       std::uint64_t seed = 0x5eed) {
  const Index n = mm.size();
  std::vector<Triple> violations;
  auto violates = [&](Index a, Index b, Index c) {
    if (mm.mode == Mode::dissimilarity) {
      return mm(a, b) > std::max(mm(a, c), mm(b, c)) + tol;
    }
    return mm(a, b) < std::min(mm(a, c), mm(b, c)) - tol;
  };
  if (n <= 200) {
    for (Index a = 0; a < n; ++a) {
      for (Index b = a + 1; b < n; ++b) {
        for (Index c = 0; c < n; ++c) {
          if (c == a || c == b) continue;
          if (violates(a, b, c)) violations.push_back({a, b, c});
        }
      }
    }
    return violations;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  for (std::size_t drawn = 0; drawn < samples;) {
    const Index a = pick(rng);
    const Index b = pick(rng);
    const Index c = pick(rng);
    if (a == b || b == c || a == c) continue;
    ++drawn;
    if (violates(a, b, c)) violations.push_back({a, b, c});
    if (violates(a, c, b)) violations.push_back({a, c, b});
    if (violates(b, c, a)) violations.push_back({b, c, a});
  }
  return violations;
}

/// n-1 lines "u v w".
template <typename Scalar>
void write_tree(std::ostream& out, const SpanningTree<Scalar>& tree) {
  for (const auto& e : tree.edges) {
    char buf[64];
    const auto end = std::to_chars(buf, buf + sizeof(buf), e.w).ptr;
    out << e.u << ' ' << e.v << ' ' << std::string_view(buf, end - buf) << '\n';
  }
}

}  // namespace gopc
