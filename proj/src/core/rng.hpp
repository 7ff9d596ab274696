#pragma once

#include <array>
#include <cstdint>

namespace bip {

/// One Philox4x32-10 block: 128 output bits from a 128-bit counter and a
/// 64-bit key.
std::array<std::uint32_t, 4> philox4x32_block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);

/// Counter-based deterministic random generator (Philox4x32-10).
///
/// A generator is a pure function of (seed, stream, position), so Monte Carlo
/// trials can derive independent substreams from (master seed, grid cell,
/// trial index) and produce identical draws regardless of thread schedule.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in {0, 1, ..., bound-1}; bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Standard normal via Box-Muller (deterministic, platform-independent).
    double normal();

    /// Fair +/-1 draw.
    double rademacher();

private:
    void refill();

    std::uint32_t key_[2];
    std::uint32_t counter_hi_[2];  // stream id, fixed per generator
    std::uint64_t block_ = 0;      // low counter words, incremented per block
    std::uint32_t buffer_[4];
    int buffered_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace bip
