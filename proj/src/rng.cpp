#include "hetfb/rng.hpp"

namespace hetfb {

Rng make_rng(std::uint64_t master_seed, std::uint64_t drop, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(drop),        static_cast<std::uint32_t>(drop >> 32),
                    static_cast<std::uint32_t>(stream),      static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace hetfb
