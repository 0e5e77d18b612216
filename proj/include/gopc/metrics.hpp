#pragma once

#include "gopc/types.hpp"

namespace gopc {

enum class NmiNormalization { arithmetic, geometric };

/// External agreement between two labelings of the same objects. The noise
/// label -1 is treated as an ordinary class. All three throw InvalidInput on
/// length mismatch or fewer than two objects.
double rand_index(const Partition& a, const Partition& b);
double adjusted_rand_index(const Partition& a, const Partition& b);

/// Mutual information over the mean entropy (arithmetic by default). Two
/// constant partitions score 1.
double nmi(const Partition& a, const Partition& b,
           NmiNormalization norm = NmiNormalization::arithmetic);

}  // namespace gopc
