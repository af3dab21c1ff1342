#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetfb/channel.hpp"

namespace hetfb {

inline constexpr std::uint64_t default_seed = 1;

struct UserDrop {
  unsigned count = 0;
  double min_distance_m = 10.0;
};

struct Scenario {
  std::string name;
  std::vector<Cell> cells;
  // Analysed cell; its associated users form K0.
  std::size_t target_cell = 0;
  // Fixed user positions, or a random drop of `count` associated users.
  std::vector<Position> users;
  std::optional<UserDrop> user_drop;
  RadioParams radio;
  double macro_radius_m = 500.0;
  double pico_radius_m = 100.0;
  std::optional<std::uint64_t> seed;
};

// JSON text. Errc::parse with the line for syntax and type errors,
// Errc::validation naming the field for everything else.
Scenario parse_scenario(const std::string& text, const std::string& source = "<string>");
Scenario load_scenario(const std::string& path);

// Throws Errc::validation naming the first broken invariant.
void validate_scenario(const Scenario& s);

struct DropRealization {
  std::vector<Position> positions;
  std::vector<UserLink> links;
  // Users associated with the target cell, in placement order.
  std::vector<LinkProfile> profiles;
  std::size_t placement_attempts = 0;
};

// Large-scale draws of one drop from make_rng(seed, drop, 0). Fixed users not
// served by the target cell are left out; random users are redrawn until
// user_drop.count land in it.
DropRealization realize_drop(const Scenario& s, std::uint64_t seed, std::uint64_t drop);

}  // namespace hetfb
