#include "urboot/rng.hpp"

namespace urboot {

Engine make_engine(std::uint64_t stream_key) {
  const std::uint64_t w0 = mix64(stream_key);
  const std::uint64_t w1 = mix64(w0);
  const std::uint64_t w2 = mix64(w1);
  const std::uint64_t w3 = mix64(w2);
  std::seed_seq seq{static_cast<std::uint32_t>(w0),
                    static_cast<std::uint32_t>(w0 >> 32),
                    static_cast<std::uint32_t>(w1),
                    static_cast<std::uint32_t>(w1 >> 32),
                    static_cast<std::uint32_t>(w2),
                    static_cast<std::uint32_t>(w2 >> 32),
                    static_cast<std::uint32_t>(w3),
                    static_cast<std::uint32_t>(w3 >> 32)};
  return Engine(seq);
}

}  // namespace urboot
