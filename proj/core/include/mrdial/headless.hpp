#pragma once

// Scripted, as-fast-as-possible game runs without a client.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mrdial/config.hpp"

namespace mrdial::headless {

/// Rotation request delivered before haptic tick `tick`.
struct InputEvent {
  std::int64_t tick = 0;
  double dial_delta = 0.0;

  friend bool operator==(const InputEvent&, const InputEvent&) = default;
};

using InputTrace = std::vector<InputEvent>;

/// Text format, one event per line: `<haptic_tick> <dial_delta_rad>`.
/// Blank lines and lines starting with '#' are ignored; ticks must be
/// non-decreasing. Errors are InputError messages of the form
/// "<source>:<line>: ...".
InputTrace parse_input_trace(std::string_view text, const std::string& source = "<trace>");
InputTrace load_input_trace(const std::string& path);
std::string format_input_trace(const InputTrace& trace);

struct PlaySummary {
  int score = 0;
  int lives = 0;
  std::int64_t ticks = 0;         ///< game ticks
  std::int64_t haptic_ticks = 0;
  std::string phase;
  std::string background;
  std::string hash;

  friend bool operator==(const PlaySummary&, const PlaySummary&) = default;
};

/// Runs the full haptic + game loop until game over or `max_haptic_ticks`.
PlaySummary play(const Config& config, const InputTrace& trace, std::int64_t max_haptic_ticks);

nlohmann::json to_json(const PlaySummary& summary);

} // namespace mrdial::headless
