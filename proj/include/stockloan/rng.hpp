#pragma once

#include <cstdint>
#include <random>

namespace stockloan {

/// SplitMix64 (Steele, Lea & Flood). Used to derive independent per-path
/// seeds so that results do not depend on how paths are spread over workers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Seed of the `index`-th substream of `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Engine for one path: a Mersenne twister seeded from the substream.
std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t index);

}  // namespace stockloan
