#include "hetfb/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "hetfb/error.hpp"
#include "hetfb/rng.hpp"

namespace hetfb {
namespace {

using nlohmann::json;

constexpr std::size_t max_attempts_per_user = 100000;

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  fail(Errc::validation, "field '" + field + "': " + what);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad(where.empty() ? "<root>" : where, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) bad(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

double number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(Errc::parse, "field '" + path + "': expected a number");
  return v.get<double>();
}

unsigned count_field(const json& obj, const std::string& key, const std::string& path, unsigned fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) fail(Errc::parse, "field '" + path + "': expected an integer");
  const auto x = v.get<long long>();
  if (x < 0 || x > 1000000) bad(path, "out of range");
  return static_cast<unsigned>(x);
}

Position position(const json& obj, const std::string& path) {
  if (!obj.contains("position_m")) bad(path + ".position_m", "missing");
  const json& v = obj.at("position_m");
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(Errc::parse, "field '" + path + ".position_m': expected [x, y] in metres");
  return {v[0].get<double>(), v[1].get<double>()};
}

double disc_radius(const Scenario& s, const Cell& c) {
  return c.tier == Tier::macro ? s.macro_radius_m : s.pico_radius_m;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, source + ":" + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  check_keys(root, "",
             {"name", "seed", "cells", "target_cell", "users", "user_drop", "bandwidth_hz", "noise_psd_dbm_per_hz",
              "num_rb", "shadowing_sigma_db", "interferer_keep_threshold", "macro_radius_m", "pico_radius_m"});
  Scenario s;
  if (root.contains("name")) {
    if (!root["name"].is_string()) fail(Errc::parse, "field 'name': expected a string");
    s.name = root["name"].get<std::string>();
  }
  if (root.contains("seed")) {
    const json& v = root["seed"];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail(Errc::parse, "field 'seed': expected a nonnegative integer");
    s.seed = v.get<std::uint64_t>();
  }
  s.radio.bandwidth_hz = number(root, "bandwidth_hz", "bandwidth_hz", s.radio.bandwidth_hz);
  s.radio.noise_psd_dbm_per_hz = number(root, "noise_psd_dbm_per_hz", "noise_psd_dbm_per_hz", s.radio.noise_psd_dbm_per_hz);
  s.radio.num_rb = count_field(root, "num_rb", "num_rb", s.radio.num_rb);
  s.radio.shadowing_sigma_db = number(root, "shadowing_sigma_db", "shadowing_sigma_db", s.radio.shadowing_sigma_db);
  s.radio.interferer_keep_threshold =
      number(root, "interferer_keep_threshold", "interferer_keep_threshold", s.radio.interferer_keep_threshold);
  s.macro_radius_m = number(root, "macro_radius_m", "macro_radius_m", s.macro_radius_m);
  s.pico_radius_m = number(root, "pico_radius_m", "pico_radius_m", s.pico_radius_m);
  s.target_cell = count_field(root, "target_cell", "target_cell", 0);

  std::vector<std::string> missing;
  if (!root.contains("cells")) missing.push_back("cells");
  if (!root.contains("users") && !root.contains("user_drop")) missing.push_back("users or user_drop");
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    fail(Errc::validation, "missing required fields: " + list);
  }

  const json& cells = root["cells"];
  if (!cells.is_array()) fail(Errc::parse, "field 'cells': expected an array");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string path = "cells[" + std::to_string(i) + "]";
    check_keys(cells[i], path, {"tier", "position_m", "tx_power_dbm"});
    Cell c;
    if (!cells[i].contains("tier")) bad(path + ".tier", "missing");
    const json& tier = cells[i]["tier"];
    if (!tier.is_string()) fail(Errc::parse, "field '" + path + ".tier': expected a string");
    if (tier == "macro") c.tier = Tier::macro;
    else if (tier == "pico") c.tier = Tier::pico;
    else bad(path + ".tier", "expected 'macro' or 'pico'");
    c.position = position(cells[i], path);
    c.tx_power_dbm = number(cells[i], "tx_power_dbm", path + ".tx_power_dbm", c.tier == Tier::macro ? 43.0 : 30.0);
    s.cells.push_back(c);
  }

  if (root.contains("users")) {
    const json& users = root["users"];
    if (!users.is_array()) fail(Errc::parse, "field 'users': expected an array");
    for (std::size_t i = 0; i < users.size(); ++i) {
      const std::string path = "users[" + std::to_string(i) + "]";
      check_keys(users[i], path, {"position_m"});
      s.users.push_back(position(users[i], path));
    }
  }
  if (root.contains("user_drop")) {
    const json& d = root["user_drop"];
    check_keys(d, "user_drop", {"count", "min_distance_m"});
    if (!d.contains("count")) bad("user_drop.count", "missing");
    UserDrop u;
    u.count = count_field(d, "count", "user_drop.count", 0);
    u.min_distance_m = number(d, "min_distance_m", "user_drop.min_distance_m", u.min_distance_m);
    s.user_drop = u;
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open scenario file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

void validate_scenario(const Scenario& s) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(s.radio.bandwidth_hz > 0.0) || !finite(s.radio.bandwidth_hz)) bad("bandwidth_hz", "must be positive");
  if (!finite(s.radio.noise_psd_dbm_per_hz)) bad("noise_psd_dbm_per_hz", "must be finite");
  if (s.radio.num_rb < 1) bad("num_rb", "must be at least 1");
  if (!(s.radio.shadowing_sigma_db >= 0.0) || !finite(s.radio.shadowing_sigma_db))
    bad("shadowing_sigma_db", "must be nonnegative");
  if (!(s.radio.interferer_keep_threshold >= 0.0) || !(s.radio.interferer_keep_threshold <= 1.0))
    bad("interferer_keep_threshold", "must lie in [0, 1]");
  if (!(s.macro_radius_m > 0.0) || !finite(s.macro_radius_m)) bad("macro_radius_m", "must be positive");
  if (!(s.pico_radius_m > 0.0) || !finite(s.pico_radius_m)) bad("pico_radius_m", "must be positive");
  if (s.cells.empty()) bad("cells", "at least one cell is required");
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    const Cell& c = s.cells[i];
    if (!finite(c.position.x) || !finite(c.position.y) || !finite(c.tx_power_dbm))
      bad("cells[" + std::to_string(i) + "]", "position and power must be finite");
  }
  if (s.target_cell >= s.cells.size()) bad("target_cell", "no such cell");
  if (s.users.empty() && !s.user_drop) bad("users", "give fixed users or a user_drop");
  if (!s.users.empty() && s.user_drop) bad("user_drop", "cannot be combined with fixed users");
  for (std::size_t i = 0; i < s.users.size(); ++i) {
    const std::string path = "users[" + std::to_string(i) + "].position_m";
    if (!finite(s.users[i].x) || !finite(s.users[i].y)) bad(path, "must be finite");
    for (const Cell& c : s.cells)
      if (distance(s.users[i], c.position) < 1.0) bad(path, "closer than 1 m to a cell");
  }
  if (s.user_drop) {
    if (s.user_drop->count < 1) bad("user_drop.count", "must be at least 1");
    if (!(s.user_drop->min_distance_m >= 1.0) || !finite(s.user_drop->min_distance_m))
      bad("user_drop.min_distance_m", "must be at least 1");
  }
}

DropRealization realize_drop(const Scenario& s, std::uint64_t seed, std::uint64_t drop) {
  Rng rng = make_rng(seed, drop, 0);
  std::normal_distribution<double> shadow(0.0, s.radio.shadowing_sigma_db);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shadowing(s.cells.size());
  auto draw_shadowing = [&] {
    for (double& v : shadowing) v = s.radio.shadowing_sigma_db > 0.0 ? shadow(rng) : 0.0;
  };

  DropRealization out;
  auto keep = [&](const Position& pos, UserLink link) {
    out.positions.push_back(pos);
    out.profiles.push_back(link.profile);
    out.links.push_back(std::move(link));
  };

  if (!s.user_drop) {
    for (const Position& pos : s.users) {
      draw_shadowing();
      ++out.placement_attempts;
      UserLink link = build_link_profile(s.cells, pos, shadowing, s.radio);
      if (link.serving_cell == s.target_cell) keep(pos, std::move(link));
    }
    if (out.profiles.empty()) fail(Errc::infeasible, "no fixed user is served by the target cell in this drop");
    return out;
  }

  const Cell& target = s.cells[s.target_cell];
  const double radius = disc_radius(s, target);
  const std::size_t limit = max_attempts_per_user * s.user_drop->count;
  while (out.profiles.size() < s.user_drop->count) {
    if (++out.placement_attempts > limit)
      fail(Errc::infeasible, "could not place enough users served by the target cell");
    const double r = radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const Position pos{target.position.x + r * std::cos(phi), target.position.y + r * std::sin(phi)};
    bool too_close = false;
    for (const Cell& c : s.cells) too_close = too_close || distance(pos, c.position) < s.user_drop->min_distance_m;
    if (too_close) continue;
    draw_shadowing();
    UserLink link = build_link_profile(s.cells, pos, shadowing, s.radio);
    if (link.serving_cell == s.target_cell) keep(pos, std::move(link));
  }
  return out;
}

}  // namespace hetfb
