#pragma once

#include <cstdint>
#include <random>

namespace hetfb {

using Rng = std::mt19937_64;

// Independent generator for (master seed, drop, stream). Depends only on its
// arguments, never on which thread asks for it.
Rng make_rng(std::uint64_t master_seed, std::uint64_t drop, std::uint64_t stream);

}  // namespace hetfb
