#pragma once

// Top-level configuration shared by every command.
//
// File layout (every block optional; missing fields take defaults):
//   {
//     "seed": 42,
//     "material": { ... } | "material_file": "mrf140cg.json",
//     "coil": { "turns", "i_max", "gap_len_mm", "kappa" },
//     "geometry": { "r0_mm", "n_teeth", ..., "housing_r_mm" },
//     "friction": { "s_factor", "coulomb_nm" },
//     "dial": { "inertia", "dt", "c_bearing", "omega_max" },
//     "input": { "k_input", "damping", "t_user_max" },
//     "effects": { all five backgrounds },
//     "game": { ... },
//     "level": { ... } | "level_file": "level.json",
//     "service": { "addr", "idle_timeout_s", "max_pending_traces" }
//   }
// File paths are resolved relative to the config file's directory.

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "mrdial/dynamics.hpp"
#include "mrdial/effects.hpp"
#include "mrdial/game.hpp"
#include "mrdial/geometry.hpp"
#include "mrdial/magnetics.hpp"
#include "mrdial/torque.hpp"

namespace mrdial {

struct ServiceParams {
  std::string addr = "127.0.0.1:8765";
  double idle_timeout_s = 10.0;
  std::size_t max_pending_traces = 256;

  friend bool operator==(const ServiceParams&, const ServiceParams&) = default;
};

struct Config {
  magnetics::MaterialModel material = magnetics::mrf140cg();
  magnetics::CoilSpec coil;
  geometry::BumpyGeometry geometry;
  torque::FrictionParams friction;
  dynamics::DialParams dial;
  dynamics::InputParams input;
  effects::EffectTable effects = effects::default_effect_table(magnetics::CoilSpec{}.max_current_a);
  game::GameConfig game;
  game::Level level = game::default_level();
  ServiceParams service;
  std::uint64_t seed = 42;

  dynamics::Plant plant() const { return {dial, geometry, coil, material, friction}; }
};

Config default_config();

/// Runs every module validation; the ConfigError names the failing
/// invariant and carries the JSON pointer of the block.
void validate(const Config& cfg);

Config config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
nlohmann::json to_json(const Config& cfg);
Config parse_config(std::string_view text, const std::string& source = "<config>",
                    const std::string& base_dir = ".");
Config load_config(const std::string& path);

} // namespace mrdial
