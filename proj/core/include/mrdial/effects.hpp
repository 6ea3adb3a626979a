#pragma once

// Background -> haptic effect -> coil current signal.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include <nlohmann/json_fwd.hpp>

namespace mrdial::effects {

enum class Background : std::uint8_t { Sky, Mud, Honey, Pebble, Asphalt };

inline constexpr std::array<Background, 5> kAllBackgrounds = {
    Background::Sky, Background::Mud, Background::Honey, Background::Pebble, Background::Asphalt};

std::string_view to_string(Background bg) noexcept;
std::optional<Background> background_from_string(std::string_view name) noexcept;

enum class ResistanceLevel : std::uint8_t { Weak, Strong, VeryStrong };

std::string_view to_string(ResistanceLevel level) noexcept;
std::optional<ResistanceLevel> level_from_string(std::string_view name) noexcept;

struct ConstantResistance {
  ResistanceLevel level = ResistanceLevel::Weak;
  double current = 0.0;  ///< A

  friend bool operator==(const ConstantResistance&, const ConstantResistance&) = default;
};

/// Square-wave current modulation: base + amplitude while the wave is high.
struct Vibration {
  double base = 0.0;       ///< A
  double amplitude = 0.0;  ///< A
  double frequency = 1.0;  ///< Hz
  double duty = 0.5;       ///< fraction of the period spent high

  friend bool operator==(const Vibration&, const Vibration&) = default;
};

using HapticEffect = std::variant<ConstantResistance, Vibration>;

/// One effect per background, indexed by the enum value.
struct EffectTable {
  std::array<HapticEffect, 5> entries;

  const HapticEffect& operator[](Background bg) const noexcept {
    return entries[static_cast<std::size_t>(bg)];
  }
  HapticEffect& operator[](Background bg) noexcept { return entries[static_cast<std::size_t>(bg)]; }

  friend bool operator==(const EffectTable&, const EffectTable&) = default;
};

/// Throws ConfigError if the effect violates its invariants under `max_current`.
void validate(const HapticEffect& effect, double max_current);
void validate(const EffectTable& table, double max_current);

/// Default table for a coil rated at `max_current`: weak/strong/very strong
/// at 0.15/0.55/0.95 of i_max; pebble 8 Hz at 0.6*i_max amplitude; asphalt
/// 80 Hz at 0.15*i_max amplitude; both vibrations ride on 0.1*i_max.
EffectTable default_effect_table(double max_current);

HapticEffect effect_for_background(Background bg, const EffectTable& table);

/// Coil current at control tick `tick` of a loop running at `rate_hz`,
/// clamped to [0, max_current]. Pure in (effect, tick).
double render(const HapticEffect& effect, std::int64_t tick, double rate_hz, double max_current);

/// Effect table JSON block: { "sky": { "type": "constant", "level": "weak",
/// "current": 0.15 }, "pebble": { "type": "vibration", "base": 0.1,
/// "amplitude": 0.6, "frequency": 8, "duty": 0.5 }, ... }. All five
/// backgrounds are required.
EffectTable effect_table_from_json(const nlohmann::json& j, double max_current);
nlohmann::json to_json(const HapticEffect& effect);
nlohmann::json to_json(const EffectTable& table);
HapticEffect effect_from_json(const nlohmann::json& j);

} // namespace mrdial::effects
