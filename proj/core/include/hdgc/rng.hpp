#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hdgc {

/// Master seeds and every seed derived from them.
using Seed = std::uint64_t;

/// Engine used for every stochastic operation in the library.
using Rng = std::mt19937_64;

/// Seed derivation tree. A child seed depends only on the parent seed and the
/// path of tags, so any sub-result (one replicate, one window, one simulation
/// run) can be regenerated without replaying its siblings.
///
///   derive_seed(master, {tag::simulate, run})
///   derive_seed(run_seed, {tag::null_bootstrap, block, b})
[[nodiscard]] Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> path) noexcept;

[[nodiscard]] inline Rng make_rng(Seed seed) { return Rng{seed}; }

namespace tag {
inline constexpr std::uint64_t simulate = 0x51;
inline constexpr std::uint64_t hypothesis_null = 0x60;
inline constexpr std::uint64_t hypothesis_alt = 0x61;
inline constexpr std::uint64_t covariance_bootstrap = 0x70;
inline constexpr std::uint64_t null_bootstrap = 0x71;
inline constexpr std::uint64_t forecast_window = 0x80;
inline constexpr std::uint64_t selection = 0x81;
inline constexpr std::uint64_t test_command = 0x90;
}  // namespace tag

}  // namespace hdgc
