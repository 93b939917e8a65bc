#ifndef KLJN_SEED_HPP_
#define KLJN_SEED_HPP_

#include <cstdint>
#include <string_view>

namespace kljn {

/// One splitmix64 step; advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic sub-seed derivation: mixes (base, label, index) so that
/// distinct labels/indices give statistically independent streams.
/// Derivation: s = splitmix(base ^ fnv1a64(label)); result = splitmix(s + index).
std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                          std::uint64_t index);

}  // namespace kljn

#endif  // KLJN_SEED_HPP_
