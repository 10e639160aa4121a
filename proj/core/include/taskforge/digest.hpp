#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace taskforge {

// SHA-256 over the given bytes, lowercase hex. All content addressing
// (task ids, trajectory ids, fixture digests, blob names) uses this.
std::string sha256_hex(std::string_view bytes);

// First 8 bytes of sha256(bytes) as a u64; used to seed deterministic
// policies from prompt text.
std::uint64_t sha256_seed(std::string_view bytes);

// splitmix64 step: advances the state and returns the mixed output.
// Documented generator behind all seeded content.
std::uint64_t splitmix64(std::uint64_t& state);

// Combine a seed with a label into a fresh 64-bit stream seed.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view label);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t n);

}  // namespace taskforge
