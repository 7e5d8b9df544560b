#pragma once

#include <cstdint>

namespace lapdsm {

// SplitMix64 in counter mode: draw i of stream s under seed is
//   mix64(key(seed, s) + (i + 1) * 0x9E3779B97F4A7C15)
// with key(seed, s) = mix64(seed) ^ mix64(s ^ 0xD1B54A32D192ED03).
// Normals come from Box-Muller on pairs of uniforms in (0, 1], cosine branch
// first. Any implementation of these three formulas reproduces the streams.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    // Uniform on (0, 1] with 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi);
    double normal();

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace lapdsm
