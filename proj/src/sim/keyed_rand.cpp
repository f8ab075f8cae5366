#include "ldsim/sim/keyed_rand.hpp"

namespace ldsim::sim {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53;
constexpr std::uint32_t kM1 = 0xCD9E8D57;
constexpr std::uint32_t kW0 = 0x9E3779B9;
constexpr std::uint32_t kW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, ctr[0], hi0, lo0);
        mulhilo(kM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double keyed_rand(std::uint64_t seed, std::int64_t iteration, std::string_view update_id,
                  std::string_view binding_key) {
    std::uint64_t h = fnv1a64(update_id);
    h = fnv1a64(std::string_view("\x1f", 1), h);
    h = fnv1a64(binding_key, h);
    auto it = static_cast<std::uint64_t>(iteration);
    PhiloxCounter ctr = {static_cast<std::uint32_t>(it), static_cast<std::uint32_t>(it >> 32),
                         static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    PhiloxKey key = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    auto out = philox4x32_10(ctr, key);
    std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 21) ^ (out[1] >> 11);
    bits &= (1ULL << 53) - 1;
    return static_cast<double>(bits) * (1.0 / 9007199254740992.0);
}

}  // namespace ldsim::sim
