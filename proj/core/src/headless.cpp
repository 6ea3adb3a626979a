#include "mrdial/headless.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mrdial/errors.hpp"
#include "mrdial/hash.hpp"
#include "mrdial/session.hpp"
#include "mrdial/sweep.hpp"

namespace mrdial::headless {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

InputTrace parse_input_trace(std::string_view text, const std::string& source) {
  InputTrace trace;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    auto fail = [&](const std::string& what) -> InputError {
      return InputError(source + ":" + std::to_string(line_no) + ": " + what);
    };

    const auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos) throw fail("expected '<haptic_tick> <dial_delta_rad>'");
    const std::string_view tick_text = line.substr(0, space);
    const std::string_view delta_text = trim(line.substr(space));

    InputEvent ev;
    auto [tick_end, tick_ec] = std::from_chars(tick_text.data(), tick_text.data() + tick_text.size(), ev.tick);
    if (tick_ec != std::errc{} || tick_end != tick_text.data() + tick_text.size() || ev.tick < 0) {
      throw fail("tick '" + std::string(tick_text) + "' is not a non-negative integer");
    }
    auto [delta_end, delta_ec] =
        std::from_chars(delta_text.data(), delta_text.data() + delta_text.size(), ev.dial_delta);
    if (delta_ec != std::errc{} || delta_end != delta_text.data() + delta_text.size() ||
        !std::isfinite(ev.dial_delta)) {
      throw fail("dial delta '" + std::string(delta_text) + "' is not a finite number");
    }
    if (!trace.empty() && ev.tick < trace.back().tick) {
      throw fail("ticks must be non-decreasing");
    }
    trace.push_back(ev);
  }
  return trace;
}

InputTrace load_input_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open input trace");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_input_trace(buf.str(), path);
}

std::string format_input_trace(const InputTrace& trace) {
  std::string out = "# haptic_tick dial_delta_rad\n";
  for (const auto& ev : trace) {
    out += std::to_string(ev.tick) + " " + sweep::format_number(ev.dial_delta) + "\n";
  }
  return out;
}

PlaySummary play(const Config& config, const InputTrace& trace, std::int64_t max_haptic_ticks) {
  validate(config);
  service::Simulation sim(config);
  std::size_t next = 0;
  while (sim.haptic_tick() < max_haptic_ticks && sim.game().phase != game::Phase::GameOver) {
    while (next < trace.size() && trace[next].tick <= sim.haptic_tick()) {
      sim.add_input(trace[next++].dial_delta);
    }
    sim.tick();
  }
  PlaySummary s;
  s.score = sim.game().score;
  s.lives = sim.game().lives;
  s.ticks = sim.game().tick;
  s.haptic_ticks = sim.haptic_tick();
  s.phase = std::string(game::to_string(sim.game().phase));
  s.background = std::string(effects::to_string(sim.game().background));
  s.hash = hash_to_hex(sim.hash());
  return s;
}

nlohmann::json to_json(const PlaySummary& s) {
  return {{"score", s.score},
          {"lives", s.lives},
          {"ticks", s.ticks},
          {"haptic_ticks", s.haptic_ticks},
          {"phase", s.phase},
          {"background", s.background},
          {"hash", s.hash}};
}

} // namespace mrdial::headless
