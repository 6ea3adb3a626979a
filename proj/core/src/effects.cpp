#include "mrdial/effects.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "mrdial/errors.hpp"

namespace mrdial::effects {

namespace {

constexpr std::array<std::string_view, 5> kBackgroundNames = {"sky", "mud", "honey", "pebble",
                                                              "asphalt"};
constexpr std::array<std::string_view, 3> kLevelNames = {"weak", "strong", "very_strong"};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool in_range(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

} // namespace

std::string_view to_string(Background bg) noexcept {
  return kBackgroundNames[static_cast<std::size_t>(bg)];
}

std::optional<Background> background_from_string(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kBackgroundNames.size(); ++i) {
    if (kBackgroundNames[i] == name) return static_cast<Background>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ResistanceLevel level) noexcept {
  return kLevelNames[static_cast<std::size_t>(level)];
}

std::optional<ResistanceLevel> level_from_string(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kLevelNames.size(); ++i) {
    if (kLevelNames[i] == name) return static_cast<ResistanceLevel>(i);
  }
  return std::nullopt;
}

void validate(const HapticEffect& effect, double max_current) {
  std::visit(overloaded{
                 [&](const ConstantResistance& c) {
                   if (!in_range(c.current, 0.0, max_current)) {
                     throw ConfigError("HapticEffect.current in [0, i_max]",
                                       "current = " + std::to_string(c.current), "/current");
                   }
                 },
                 [&](const Vibration& v) {
                   if (!in_range(v.base, 0.0, max_current)) {
                     throw ConfigError("HapticEffect.base in [0, i_max]",
                                       "base = " + std::to_string(v.base), "/base");
                   }
                   if (!in_range(v.amplitude, 0.0, max_current)) {
                     throw ConfigError("HapticEffect.amplitude in [0, i_max]",
                                       "amplitude = " + std::to_string(v.amplitude), "/amplitude");
                   }
                   if (v.base + v.amplitude > max_current) {
                     throw ConfigError("HapticEffect base + amplitude <= i_max",
                                       std::to_string(v.base + v.amplitude) + " A", "/amplitude");
                   }
                   if (!(v.frequency > 0.0) || !std::isfinite(v.frequency)) {
                     throw ConfigError("HapticEffect.frequency > 0",
                                       "frequency = " + std::to_string(v.frequency), "/frequency");
                   }
                   if (!(v.duty > 0.0 && v.duty <= 1.0)) {
                     throw ConfigError("HapticEffect.duty in (0, 1]",
                                       "duty = " + std::to_string(v.duty), "/duty");
                   }
                 },
             },
             effect);
}

void validate(const EffectTable& table, double max_current) {
  for (const Background bg : kAllBackgrounds) {
    try {
      validate(table[bg], max_current);
    } catch (const ConfigError& e) {
      throw e.nested("/" + std::string(to_string(bg)));
    }
  }
}

EffectTable default_effect_table(double max_current) {
  const double i = max_current;
  EffectTable t;
  t[Background::Sky] = ConstantResistance{ResistanceLevel::Weak, 0.15 * i};
  t[Background::Mud] = ConstantResistance{ResistanceLevel::Strong, 0.55 * i};
  t[Background::Honey] = ConstantResistance{ResistanceLevel::VeryStrong, 0.95 * i};
  t[Background::Pebble] = Vibration{0.1 * i, 0.6 * i, 8.0, 0.5};
  t[Background::Asphalt] = Vibration{0.1 * i, 0.15 * i, 80.0, 0.5};
  return t;
}

HapticEffect effect_for_background(Background bg, const EffectTable& table) { return table[bg]; }

double render(const HapticEffect& effect, std::int64_t tick, double rate_hz, double max_current) {
  const double raw = std::visit(
      overloaded{
          [](const ConstantResistance& c) { return c.current; },
          [&](const Vibration& v) {
            // Phase in [0, 1): fraction of the current period elapsed at this tick.
            const double cycles = static_cast<double>(tick) * v.frequency;
            const double phase = std::fmod(cycles, rate_hz) / rate_hz;
            const double wave = phase < v.duty ? 1.0 : 0.0;
            return v.base + v.amplitude * wave;
          },
      },
      effect);
  return std::clamp(raw, 0.0, max_current);
}

HapticEffect effect_from_json(const nlohmann::json& j) {
  const std::string owner = "HapticEffect";
  const std::string type = detail::string(j, "type", "", owner);
  if (type == "constant") {
    const std::string level_name = detail::string(j, "level", "", owner);
    const auto level = level_from_string(level_name);
    if (!level) {
      throw ConfigError("HapticEffect.level is weak|strong|very_strong", "got '" + level_name + "'",
                        "/level");
    }
    return ConstantResistance{*level, detail::number(j, "current", "", owner)};
  }
  if (type == "vibration") {
    Vibration v;
    v.base = detail::number(j, "base", "", owner);
    v.amplitude = detail::number(j, "amplitude", "", owner);
    v.frequency = detail::number(j, "frequency", "", owner);
    v.duty = detail::number_or(j, "duty", 0.5, "", owner);
    return v;
  }
  throw ConfigError("HapticEffect.type is constant|vibration", "got '" + type + "'", "/type");
}

EffectTable effect_table_from_json(const nlohmann::json& j, double max_current) {
  if (!j.is_object()) throw ConfigError("EffectTable is an object", "got " + j.dump(), "");
  for (const auto& [key, value] : j.items()) {
    if (!background_from_string(key)) {
      throw ConfigError("EffectTable keys are backgrounds", "unknown background '" + key + "'",
                        "/" + key);
    }
  }
  EffectTable table;
  for (const Background bg : kAllBackgrounds) {
    const std::string key(to_string(bg));
    if (!j.contains(key)) {
      throw ConfigError("EffectTable defines all five backgrounds", "missing '" + key + "'", "");
    }
    try {
      table[bg] = effect_from_json(j.at(key));
      validate(table[bg], max_current);
    } catch (const ConfigError& e) {
      throw e.nested("/" + key);
    }
  }
  return table;
}

nlohmann::json to_json(const HapticEffect& effect) {
  return std::visit(overloaded{
                        [](const ConstantResistance& c) -> nlohmann::json {
                          return {{"type", "constant"},
                                  {"level", std::string(to_string(c.level))},
                                  {"current", c.current}};
                        },
                        [](const Vibration& v) -> nlohmann::json {
                          return {{"type", "vibration"},
                                  {"base", v.base},
                                  {"amplitude", v.amplitude},
                                  {"frequency", v.frequency},
                                  {"duty", v.duty}};
                        },
                    },
                    effect);
}

nlohmann::json to_json(const EffectTable& table) {
  nlohmann::json j = nlohmann::json::object();
  for (const Background bg : kAllBackgrounds) j[std::string(to_string(bg))] = to_json(table[bg]);
  return j;
}

} // namespace mrdial::effects
