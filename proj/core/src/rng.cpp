#include "hdgc/rng.hpp"

namespace hdgc {
namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t state = mix(parent);
    for (std::uint64_t step : path) {
        state = mix(state ^ mix(step + 0x632be59bd9b4e019ULL));
    }
    return state;
}

}  // namespace hdgc
