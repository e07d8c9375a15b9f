#pragma once

#include "fairdiv/instance.hpp"

#include <cstdint>

namespace fairdiv {

enum class WeightMode { equal, random_ints };

/// Seeded bivalued instance: each value is 1 or k with probability 1/2;
/// random weights are integers 1..9, normalized later by validation. The
/// declared k keeps single-valued matrices valid.
RawInstance random_raw_instance(std::uint64_t seed, int n, int m, const Rational& k,
                                WeightMode weights);

Instance random_instance(std::uint64_t seed, int n, int m, const Rational& k, WeightMode weights);

} // namespace fairdiv
