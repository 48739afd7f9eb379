#pragma once

#include <cstdint>

namespace dmapper {

/// Child seed for stream `stream` of a run seeded with `seed` (splitmix64 mix).
/// Streams are independent of each other and of evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace dmapper
