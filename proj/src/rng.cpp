#include "adaptest/rng.hpp"

#include <cmath>
#include <numbers>

namespace adaptest {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

rng_stream::rng_stream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Mix the stream id into the splitmix starting point with an odd
    // multiplier so that consecutive ids land far apart in splitmix space.
    std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ull * (stream_id + 0x632BE59BD9B4E019ull));
    for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t rng_stream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double rng_stream::uniform01() {
    // 53-bit mantissa shifted into (0, 1]: the +1 excludes zero.
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double rng_stream::standard_normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace adaptest
