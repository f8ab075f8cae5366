#pragma once

// Counter-based randomness keyed by (seed, iteration, update id, binding).
//
// A draw is a pure function of its four inputs: Philox4x32-10 keyed by the
// seed, with the counter built from the iteration and a 64-bit FNV-1a hash of
// the update id and binding key. Nothing depends on call order.

#include <array>
#include <cstdint>
#include <string_view>

namespace ldsim::sim {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL);

// Uniform real in [0, 1).
double keyed_rand(std::uint64_t seed, std::int64_t iteration, std::string_view update_id,
                  std::string_view binding_key);

}  // namespace ldsim::sim
