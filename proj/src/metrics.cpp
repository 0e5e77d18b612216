#include "gopc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gopc {
namespace {

struct Contingency {
  double n = 0;
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows;
  std::map<int, double> cols;
};

Contingency tabulate(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("partitions differ in length: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
  }
  if (a.size() < 2) throw InvalidInput("metrics need at least two objects");
  Contingency t;
  t.n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    t.cells[{a[i], b[i]}] += 1;
    t.rows[a[i]] += 1;
    t.cols[b[i]] += 1;
  }
  return t;
}

double pairs(double m) { return m * (m - 1) / 2; }

template <typename Map>
double sum_pairs(const Map& counts) {
  double s = 0;
  for (const auto& [key, m] : counts) s += pairs(m);
  return s;
}

template <typename Map>
double entropy(const Map& counts, double n) {
  double h = 0;
  for (const auto& [key, m] : counts) {
    const double p = m / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double rand_index(const Partition& a, const Partition& b) {
  const auto t = tabulate(a, b);
  const double total = pairs(t.n);
  const double same_both = sum_pairs(t.cells);
  const double same_a = sum_pairs(t.rows);
  const double same_b = sum_pairs(t.cols);
  // Agreements: together in both, plus apart in both.
  const double agree = same_both + (total - same_a - same_b + same_both);
  return agree / total;
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
  const auto t = tabulate(a, b);
  const double index = sum_pairs(t.cells);
  const double sa = sum_pairs(t.rows);
  const double sb = sum_pairs(t.cols);
  const double expected = sa * sb / pairs(t.n);
  const double max_index = (sa + sb) / 2;
  // Zero denominator: both all-singletons or both a single cluster, which
  // means the partitions coincide.
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double nmi(const Partition& a, const Partition& b, NmiNormalization norm) {
  const auto t = tabulate(a, b);
  const double ha = entropy(t.rows, t.n);
  const double hb = entropy(t.cols, t.n);
  if (ha == 0 && hb == 0) return 1.0;
  double mi = 0;
  for (const auto& [key, m] : t.cells) {
    const double pa = t.rows.at(key.first) / t.n;
    const double pb = t.cols.at(key.second) / t.n;
    const double p = m / t.n;
    mi += p * std::log(p / (pa * pb));
  }
  mi = std::max(mi, 0.0);
  const double denom = norm == NmiNormalization::arithmetic ? (ha + hb) / 2 : std::sqrt(ha * hb);
  if (denom == 0) return 0.0;
  return std::min(mi / denom, 1.0);
}

}  // namespace gopc
