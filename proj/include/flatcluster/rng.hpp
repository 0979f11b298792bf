#pragma once

#include <cstdint>
#include <limits>

namespace flatcluster {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Tags separating the substream families derived from one master seed.
enum class StreamTag : std::uint64_t {
    flat = 1,
    shuffle = 2,
    sample = 3,
    subsample = 4,
    family = 5,
};

/// xoshiro256** with splitmix64 seeding. Satisfies UniformRandomBitGenerator,
/// so it plugs into the <random> distributions. Substreams are derived from
/// (seed, tag, index) so that any worker can reconstruct the stream of any
/// sample without coordination.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed) { reseed(seed); }

    RngStream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
        std::uint64_t h = seed;
        std::uint64_t mixed = splitmix64(h);
        mixed ^= static_cast<std::uint64_t>(tag) * 0xD1B54A32D192ED03ULL;
        h = mixed;
        mixed = splitmix64(h) ^ (index * 0x8CB92BA72F3D8DD7ULL);
        reseed(mixed);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    void reseed(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t state_[4]{};
};

/// Uniform integer in [0, n) by rejection, independent of the standard
/// library's distribution implementations.
inline std::uint64_t uniform_index(RngStream& rng, std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % n;
}

}  // namespace flatcluster
