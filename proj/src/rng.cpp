#include "stockloan/rng.hpp"

namespace stockloan {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    SplitMix64 outer(seed);
    const std::uint64_t base = outer();
    SplitMix64 inner(base ^ (index * 0xd1b54a32d192ed03ULL));
    inner();
    return inner();
}

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(substream_seed(seed, index));
}

}  // namespace stockloan
