#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace urboot {

using Engine = std::mt19937_64;

/// @brief Mixes a 64-bit word through the splitmix64 finalizer.
///
/// Bijective and strongly avalanching, so structured inputs (small counters,
/// bit-cast doubles) map to well-spread keys.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// @brief Derives a substream key from a root seed and an identifier path.
///
/// Equal (seed, path) pairs always yield the same key, so every random
/// stream in the library is addressed by what it is for rather than by
/// execution order. That makes parallel runs reproducible for any thread
/// count and keeps unrelated cells of an experiment independent of each
/// other's presence.
[[nodiscard]] constexpr std::uint64_t derive_stream(
    std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t key = mix64(seed ^ 0x7c0ffee5eed5a1adULL);
  for (std::uint64_t id : path) {
    key = mix64(key ^ mix64(id));
  }
  return key;
}

/// Stream role tags used as the first path element of derive_stream.
namespace stream_tag {
inline constexpr std::uint64_t data = 0x64617461ULL;         // DGP innovations
inline constexpr std::uint64_t multipliers = 0x6d756c74ULL;  // bootstrap multipliers
inline constexpr std::uint64_t replication = 0x72657065ULL;  // per-replication split
}  // namespace stream_tag

/// @brief Builds a generator for one substream key.
///
/// The key is expanded to four words before seeding so engines for adjacent
/// keys start from unrelated states.
[[nodiscard]] Engine make_engine(std::uint64_t stream_key);

}  // namespace urboot
