#pragma once

// Deterministic random numbers.
//
// Seeding: splitmix64 expands a 64-bit seed into the 256-bit state.
//     z = (s += 0x9e3779b97f4a7c15)
//     z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//     z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//     return z ^ (z >> 31)
// Generator: xoshiro256** (Blackman & Vigna).
//     result = rotl(s1 * 5, 7) * 9
//     t = s1 << 17
//     s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)
// Streams: jump() advances the state by 2^128 steps, giving non-overlapping
// subsequences for independent consumers.
// Uniform doubles take the top 53 bits: (x >> 11) * 2^-53, in [0, 1).
// Normals: Box-Muller on (u1, u2) with u1 in (0, 1]; the second variate of each
// pair is cached and returned by the next call.
//
// Only integer operations and IEEE-754 log/sqrt/cos/sin are involved, so
// sequences are identical across platforms with a conforming libm.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace golu {

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : s_) {
            word = sm.next();
        }
    }

    /// Generator for stream `stream` of `seed`: the seeded state jumped `stream` times.
    static Rng stream(std::uint64_t seed, unsigned stream) {
        Rng r(seed);
        for (unsigned i = 0; i < stream; ++i) {
            r.jump();
        }
        return r;
    }

    /// Generator with an explicit state, which must not be all zero.
    static Rng from_state(const std::array<std::uint64_t, 4>& state) {
        Rng r(0);
        r.s_ = state;
        return r;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64() {
        const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

    void jump() {
        constexpr std::array<std::uint64_t, 4> kJump = {0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                                        0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
        std::array<std::uint64_t, 4> acc{};
        for (std::uint64_t word : kJump) {
            for (int b = 0; b < 64; ++b) {
                if (word & (std::uint64_t{1} << b)) {
                    for (int i = 0; i < 4; ++i) {
                        acc[i] ^= s_[i];
                    }
                }
                next_u64();
            }
        }
        s_ = acc;
        has_spare_ = false;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n) by rejection (no modulo bias). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t x = next_u64();
        while (x >= limit) {
            x = next_u64();
        }
        return x % n;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace golu
