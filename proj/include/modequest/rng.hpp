#pragma once

#include <cstdint>
#include <random>

namespace modequest {

/// Mixes a 64-bit value through one splitmix64 round.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent sub-seed from a master seed and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    std::uint64_t state = master ^ (0xD1B54A32D192ED03ULL * (tag + 1));
    std::uint64_t a = splitmix64(state);
    std::uint64_t b = splitmix64(state);
    return a ^ (b << 1);
}

/// Per-trial random stream. Identical (seed, stream) pairs produce
/// bit-identical draw sequences regardless of scheduling, which is what
/// makes parallel benchmarks reproducible.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
        std::uint64_t state = derive_seed(seed, stream);
        std::uint64_t a = splitmix64(state);
        std::uint64_t b = splitmix64(state);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased uniform draw from {0, 1, ..., n-1} (rejection sampling, so
    /// the result does not depend on the standard library's distribution
    /// implementation).
    std::int64_t uniform_below(std::int64_t n) {
        const auto un = static_cast<std::uint64_t>(n);
        const std::uint64_t reject_below = (~std::uint64_t{0} - un + 1) % un;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = engine_();
            if (r >= reject_below) return static_cast<std::int64_t>(r % un);
        }
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace modequest
