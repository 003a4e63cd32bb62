#pragma once
// Seedable platform-independent random source (xoshiro256** seeded by splitmix64).
//
// All draws used by the simulators go through integer arithmetic only, so a
// given seed and call sequence yields the same stream on every platform.

#include <cstdint>
#include <limits>
#include <string_view>

namespace dnasim {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stable hash of (seed, index) used for per-payload and per-stage seeds.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    std::uint64_t t = index ^ 0xD1B54A32D192ED03ULL;
    std::uint64_t b = splitmix64(t);
    std::uint64_t mixed = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    return splitmix64(mixed);
}

class RandomSource {
public:
    using result_type = std::uint64_t;
    static constexpr std::string_view kAlgorithm = "xoshiro256**";

    explicit RandomSource(std::uint64_t seed) noexcept : seed_(seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next() noexcept {
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

    // Uniform integer in [0, n); n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t operator()() noexcept { return next(); }
    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return std::numeric_limits<std::uint64_t>::max(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t state_[4]{};
};

// Bernoulli gate evaluated as an integer comparison against a 64-bit threshold.
class Bernoulli {
public:
    Bernoulli() = default;
    explicit Bernoulli(double p) noexcept {
        if (!(p > 0.0)) {
            threshold_ = 0;
        } else if (p >= 1.0) {
            always_ = true;
        } else {
            threshold_ = static_cast<std::uint64_t>(p * 0x1.0p64);
        }
    }
    bool operator()(RandomSource& rng) const noexcept {
        if (always_) return true;
        if (threshold_ == 0) return false;
        return rng.next() < threshold_;
    }
    bool never() const noexcept { return !always_ && threshold_ == 0; }

private:
    std::uint64_t threshold_ = 0;
    bool always_ = false;
};

}  // namespace dnasim
