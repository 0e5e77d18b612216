#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <vector>

namespace gopc {

/// Correctly rounded floating-point accumulator (Shewchuk's non-overlapping
/// partials, final rounding as in Python's math.fsum).
///
/// Two sums whose exact real values agree produce the same Scalar,
/// regardless of the order or grouping of their terms. Objective and gain
/// comparisons rely on this to be exact.
template <std::floating_point Scalar>
class ExactSum {
 public:
  ExactSum() { partials_.reserve(8); }

  void add(Scalar x) {
    std::size_t kept = 0;
    for (std::size_t i = 0; i < partials_.size(); ++i) {
      Scalar y = partials_[i];
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const Scalar hi = x + y;
      const Scalar lo = y - (hi - x);
      if (lo != 0) partials_[kept++] = lo;
      x = hi;
    }
    partials_.resize(kept);
    partials_.push_back(x);
  }

  ExactSum& operator+=(Scalar x) {
    add(x);
    return *this;
  }

  ExactSum& operator-=(Scalar x) {
    add(-x);
    return *this;
  }

  void clear() { partials_.clear(); }

  Scalar value() const {
    std::size_t n = partials_.size();
    if (n == 0) return Scalar(0);
    Scalar hi = partials_[--n];
    Scalar lo = 0;
    while (n > 0) {
      const Scalar x = hi;
      const Scalar y = partials_[--n];
      hi = x + y;
      const Scalar yr = hi - x;
      lo = y - yr;
      if (lo != 0) break;
    }
    // Round half-even correction when the remaining partials push the
    // residual past the halfway point.
    if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) ||
                  (lo > 0 && partials_[n - 1] > 0))) {
      const Scalar y = lo * 2;
      const Scalar x = hi + y;
      const Scalar yr = x - hi;
      if (y == yr) hi = x;
    }
    return hi;
  }

 private:
  std::vector<Scalar> partials_;
};

template <std::floating_point Scalar, typename Range>
Scalar exact_sum(const Range& values) {
  ExactSum<Scalar> acc;
  for (const auto v : values) acc.add(static_cast<Scalar>(v));
  return acc.value();
}

}  // namespace gopc
