#pragma once

// Deterministic breakout. The playfield is the unit square with y pointing
// down; the bottom edge is open. Bricks fill a band near the top, split into
// row bands that each carry a background.
//
// Ball motion uses continuous collision detection: within a tick the ball
// flies to the earliest contact, responds, and continues with the remaining
// time, so the outcome does not depend on how finely the tick is sliced.
// The ball is collided as its bounding square (targets are expanded by the
// ball radius, corners not rounded).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mrdial/effects.hpp"

namespace mrdial::game {

using effects::Background;

inline constexpr double kTickSeconds = 1.0 / 60.0;
inline constexpr int kPointsPerBrick = 10;

enum class Phase : std::uint8_t { Serving, Playing, GameOver };
std::string_view to_string(Phase phase) noexcept;

struct Band {
  std::vector<int> rows;
  Background background = Background::Sky;

  friend bool operator==(const Band&, const Band&) = default;
};

struct Level {
  std::string name = "level";
  int rows = 10;
  int cols = 10;
  std::vector<Band> bands;  ///< in level order

  friend bool operator==(const Level&, const Level&) = default;
};

/// Five bands of two rows each, from the bottom brick rows (hit first) up:
/// sky, mud, honey, pebble, asphalt.
Level default_level();

struct GameConfig {
  double dial_gain = 0.15915494309189535;  ///< k_dial, 1/(2*pi): one turn sweeps the paddle range
  double paddle_width = 0.18;
  double paddle_y = 0.92;        ///< top face
  double paddle_height = 0.02;
  double ball_radius = 0.012;
  double ball_speed = 0.7;       ///< serve speed, also v_min
  double max_ball_speed = 1.2;   ///< v_max
  double paddle_speedup = 1.02;  ///< speed factor per paddle hit
  double max_bounce_angle = 1.0471975511965976;  ///< 60 deg from vertical at the paddle edge
  double serve_angle = 0.5235987755982988;       ///< launch angle drawn from +-30 deg
  int serve_delay_ticks = 45;
  int lives = 3;
  double brick_top = 0.08;
  double brick_bottom = 0.38;

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Ball {
  Vec2 pos;
  Vec2 vel;  ///< playfield units per second

  friend bool operator==(const Ball&, const Ball&) = default;
};

struct GameState {
  double paddle_x = 0.5;
  Ball ball;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> alive;  ///< row-major, 1 = standing
  int destroyed = 0;
  int score = 0;
  int lives = 0;
  Background background = Background::Sky;
  std::uint64_t rng_seed = 0;
  std::uint64_t rng_state = 0;
  std::int64_t tick = 0;
  Phase phase = Phase::Serving;
  int serve_timer = 0;
  int last_destroyed = -1;  ///< brick index, -1 before the first hit

  int bricks_alive() const noexcept { return rows * cols - destroyed; }
  friend bool operator==(const GameState&, const GameState&) = default;
};

void validate(const Level& level);
void validate(const GameConfig& cfg, const Level& level);

GameState new_game(const Level& level, const GameConfig& cfg, std::uint64_t seed);

/// One 1/60 s tick with the paddle placed from the dial angle.
GameState game_tick(const GameState& state, double dial_theta, const Level& level,
                    const GameConfig& cfg);

/// Background of the most recently destroyed brick's band; once that band
/// is cleared, the next band in level order that still has bricks. Before
/// any hit, the first band with bricks.
Background background_for_level(const Level& level, const GameState& state);

/// clamp(0.5 + k_dial * theta, 0, 1)
double paddle_position(double dial_theta, const GameConfig& cfg) noexcept;

/// Quantized digest of the full state.
std::uint64_t state_hash(const GameState& state);

// Collision primitives, shared with reference steppers.

struct Box {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

enum class Axis : std::uint8_t { X, Y };

/// Target boxes already expanded by the ball radius.
Box brick_box(int index, const GameState& state, const GameConfig& cfg);
Box paddle_box(double paddle_x, const GameConfig& cfg);

/// Ball position while glued to the paddle during a serve, kept clear of the walls.
Vec2 serve_position(double paddle_x, const GameConfig& cfg) noexcept;

/// Response rules. Walls and bricks mirror the velocity component on
/// `axis`; the paddle top redirects the ball by hit offset and speeds it up.
Vec2 reflect(Vec2 vel, Axis axis) noexcept;
Vec2 paddle_bounce(const Ball& ball, double paddle_x, Axis axis, const GameConfig& cfg);

/// Applies the bookkeeping of losing the ball (lives, phase, serve reset).
void lose_ball(GameState& state, const GameConfig& cfg);
/// Marks a brick destroyed and updates score/background/phase.
void destroy_brick(GameState& state, int index, const Level& level);
/// Launches the glued ball using the state's RNG.
void launch(GameState& state, const GameConfig& cfg);

Level level_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Level& level);
Level parse_level(std::string_view text, const std::string& source = "<level>");
Level load_level(const std::string& path);
GameConfig game_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GameConfig& cfg);

} // namespace mrdial::game
