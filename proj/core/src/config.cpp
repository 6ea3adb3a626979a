#include "mrdial/config.hpp"

#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "mrdial/errors.hpp"

namespace mrdial {

using detail::json;

namespace {

// Runs `fn` and prefixes any ConfigError pointer with `/block`.
template <class Fn>
auto in_block(const char* block, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw e.nested(std::string("/") + block);
  }
}

// Block from the file laid over the serialized default, so partial blocks
// keep defaults for the fields they omit.
json overlay(const json& defaults, const json& file, const char* key) {
  json merged = defaults;
  if (file.contains(key)) {
    const json& block = file.at(key);
    if (!block.is_object()) {
      throw ConfigError(std::string(key) + " block is an object", "got " + block.dump(),
                        std::string("/") + key);
    }
    merged.merge_patch(block);
  }
  return merged;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

void validate_service(const ServiceParams& s) {
  if (!(s.idle_timeout_s > 0.0) || !std::isfinite(s.idle_timeout_s)) {
    throw ConfigError("ServiceParams.idle_timeout_s > 0", std::to_string(s.idle_timeout_s),
                      "/idle_timeout_s");
  }
  if (s.max_pending_traces < 1) {
    throw ConfigError("ServiceParams.max_pending_traces >= 1", "0", "/max_pending_traces");
  }
}

} // namespace

Config default_config() { return Config{}; }

void validate(const Config& c) {
  in_block("material", [&] { magnetics::validate(c.material); });
  in_block("coil", [&] { magnetics::validate(c.coil); });
  in_block("geometry", [&] { geometry::validate(c.geometry); });
  in_block("friction", [&] { torque::validate(c.friction); });
  in_block("dial", [&] { dynamics::validate(c.dial); });
  in_block("input", [&] { dynamics::validate(c.input); });
  in_block("effects", [&] { effects::validate(c.effects, c.coil.max_current_a); });
  in_block("level", [&] { game::validate(c.level); });
  in_block("game", [&] { game::validate(c.game, c.level); });
  in_block("service", [&] { validate_service(c.service); });
}

Config config_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("config is a JSON object", "got " + j.dump(), "");
  Config c;

  if (j.contains("seed")) {
    const json& seed = j.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      throw ConfigError("seed is a non-negative integer", "got " + seed.dump(), "/seed");
    }
    c.seed = seed.get<std::uint64_t>();
  }

  if (j.contains("material") && j.contains("material_file")) {
    throw ConfigError("at most one of material / material_file", "both given", "/material_file");
  }
  if (j.contains("material_file")) {
    const std::string path = resolve(base_dir, detail::string(j, "material_file", "", "Config"));
    c.material = magnetics::load_material(path);
  } else if (j.contains("material")) {
    c.material = in_block("material", [&] { return magnetics::material_from_json(j.at("material")); });
  }

  c.coil = in_block("coil", [&] {
    return magnetics::coil_from_json(overlay(magnetics::to_json(c.coil), j, "coil"));
  });
  c.geometry = in_block("geometry", [&] {
    return geometry::geometry_from_json(overlay(geometry::to_json(c.geometry), j, "geometry"));
  });
  c.friction = in_block("friction", [&] {
    return torque::friction_from_json(overlay(torque::to_json(c.friction), j, "friction"));
  });
  c.dial = in_block("dial", [&] {
    return dynamics::dial_params_from_json(overlay(dynamics::to_json(c.dial), j, "dial"));
  });
  c.input = in_block("input", [&] {
    return dynamics::input_params_from_json(overlay(dynamics::to_json(c.input), j, "input"));
  });

  if (j.contains("effects")) {
    c.effects = in_block("effects", [&] {
      return effects::effect_table_from_json(j.at("effects"), c.coil.max_current_a);
    });
  } else {
    c.effects = effects::default_effect_table(c.coil.max_current_a);
  }

  if (j.contains("level") && j.contains("level_file")) {
    throw ConfigError("at most one of level / level_file", "both given", "/level_file");
  }
  if (j.contains("level_file")) {
    c.level = game::load_level(resolve(base_dir, detail::string(j, "level_file", "", "Config")));
  } else if (j.contains("level")) {
    c.level = in_block("level", [&] { return game::level_from_json(j.at("level")); });
  }
  c.game = in_block("game", [&] {
    return game::game_config_from_json(overlay(game::to_json(c.game), j, "game"));
  });

  c.service = in_block("service", [&] {
    const json s = overlay({{"addr", c.service.addr},
                            {"idle_timeout_s", c.service.idle_timeout_s},
                            {"max_pending_traces", c.service.max_pending_traces}},
                           j, "service");
    ServiceParams p;
    p.addr = detail::string(s, "addr", "", "ServiceParams");
    p.idle_timeout_s = detail::number(s, "idle_timeout_s", "", "ServiceParams");
    const long long pending = detail::integer(s, "max_pending_traces", "", "ServiceParams");
    if (pending < 1) {
      throw ConfigError("ServiceParams.max_pending_traces >= 1", std::to_string(pending),
                        "/max_pending_traces");
    }
    p.max_pending_traces = static_cast<std::size_t>(pending);
    return p;
  });

  validate(c);
  return c;
}

json to_json(const Config& c) {
  return {{"seed", c.seed},
          {"material", magnetics::to_json(c.material)},
          {"coil", magnetics::to_json(c.coil)},
          {"geometry", geometry::to_json(c.geometry)},
          {"friction", torque::to_json(c.friction)},
          {"dial", dynamics::to_json(c.dial)},
          {"input", dynamics::to_json(c.input)},
          {"effects", effects::to_json(c.effects)},
          {"game", game::to_json(c.game)},
          {"level", game::to_json(c.level)},
          {"service",
           {{"addr", c.service.addr},
            {"idle_timeout_s", c.service.idle_timeout_s},
            {"max_pending_traces", c.service.max_pending_traces}}}};
}

Config parse_config(std::string_view text, const std::string& source, const std::string& base_dir) {
  const json j = detail::parse_text(text, source);
  try {
    return config_from_json(j, base_dir);
  } catch (const ConfigError& e) {
    // Errors raised while loading a referenced file are already anchored.
    if (!e.source().empty()) throw;
    detail::rethrow_anchored(e, text, source);
  }
}

Config load_config(const std::string& path) {
  const std::filesystem::path p(path);
  const std::string base = p.has_parent_path() ? p.parent_path().string() : ".";
  return parse_config(detail::read_file(path), path, base);
}

} // namespace mrdial
