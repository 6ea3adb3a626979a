#include "mrdial/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "mrdial/errors.hpp"
#include "mrdial/hash.hpp"

namespace mrdial::game {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxEventsPerTick = 64;

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_uniform(std::uint64_t& state) noexcept {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

struct Contact {
  double t = kInf;
  enum class Kind { None, LeftWall, RightWall, TopWall, Lost, Paddle, Brick } kind = Kind::None;
  int index = -1;
  Axis axis = Axis::Y;
};

// Entry time of a point moving with `v` into the open box, if it enters.
bool sweep(const Vec2& p, const Vec2& v, const Box& b, double& t_enter, Axis& axis) {
  double tx0 = -kInf, tx1 = kInf, ty0 = -kInf, ty1 = kInf;
  if (v.x > 0.0) {
    tx0 = (b.x0 - p.x) / v.x;
    tx1 = (b.x1 - p.x) / v.x;
  } else if (v.x < 0.0) {
    tx0 = (b.x1 - p.x) / v.x;
    tx1 = (b.x0 - p.x) / v.x;
  } else if (p.x <= b.x0 || p.x >= b.x1) {
    return false;
  }
  if (v.y > 0.0) {
    ty0 = (b.y0 - p.y) / v.y;
    ty1 = (b.y1 - p.y) / v.y;
  } else if (v.y < 0.0) {
    ty0 = (b.y1 - p.y) / v.y;
    ty1 = (b.y0 - p.y) / v.y;
  } else if (p.y <= b.y0 || p.y >= b.y1) {
    return false;
  }
  const double enter = std::max(tx0, ty0);
  const double exit = std::min(tx1, ty1);
  if (!(enter < exit) || enter < 0.0) return false;
  t_enter = enter;
  axis = tx0 > ty0 ? Axis::X : Axis::Y;
  return true;
}

void consider(Contact& best, double t, Contact::Kind kind, int index, Axis axis) {
  if (t < best.t) best = Contact{t, kind, index, axis};
}

Contact earliest_contact(const GameState& s, const GameConfig& cfg) {
  const Vec2& p = s.ball.pos;
  const Vec2& v = s.ball.vel;
  const double r = cfg.ball_radius;
  Contact best;
  if (v.x < 0.0) consider(best, std::max(0.0, (r - p.x) / v.x), Contact::Kind::LeftWall, -1, Axis::X);
  if (v.x > 0.0) {
    consider(best, std::max(0.0, (1.0 - r - p.x) / v.x), Contact::Kind::RightWall, -1, Axis::X);
  }
  if (v.y < 0.0) consider(best, std::max(0.0, (r - p.y) / v.y), Contact::Kind::TopWall, -1, Axis::Y);
  if (v.y > 0.0) consider(best, std::max(0.0, (1.0 + r - p.y) / v.y), Contact::Kind::Lost, -1, Axis::Y);

  double t = 0.0;
  Axis axis = Axis::Y;
  if (sweep(p, v, paddle_box(s.paddle_x, cfg), t, axis)) {
    consider(best, t, Contact::Kind::Paddle, -1, axis);
  }
  const int n = s.rows * s.cols;
  for (int i = 0; i < n; ++i) {
    if (!s.alive[static_cast<std::size_t>(i)]) continue;
    if (sweep(p, v, brick_box(i, s, cfg), t, axis)) consider(best, t, Contact::Kind::Brick, i, axis);
  }
  return best;
}

void advance_ball(GameState& s, const Level& level, const GameConfig& cfg, double duration) {
  double remaining = duration;
  const double r = cfg.ball_radius;
  for (int events = 0; events < kMaxEventsPerTick && s.phase == Phase::Playing; ++events) {
    const Contact c = earliest_contact(s, cfg);
    if (c.kind == Contact::Kind::None || c.t > remaining) break;

    Ball& b = s.ball;
    b.pos.x += b.vel.x * c.t;
    b.pos.y += b.vel.y * c.t;
    remaining -= c.t;

    switch (c.kind) {
      case Contact::Kind::LeftWall:
        b.pos.x = r;
        b.vel = reflect(b.vel, Axis::X);
        break;
      case Contact::Kind::RightWall:
        b.pos.x = 1.0 - r;
        b.vel = reflect(b.vel, Axis::X);
        break;
      case Contact::Kind::TopWall:
        b.pos.y = r;
        b.vel = reflect(b.vel, Axis::Y);
        break;
      case Contact::Kind::Lost:
        lose_ball(s, cfg);
        return;
      case Contact::Kind::Paddle:
        b.vel = paddle_bounce(b, s.paddle_x, c.axis, cfg);
        break;
      case Contact::Kind::Brick:
        b.vel = reflect(b.vel, c.axis);
        destroy_brick(s, c.index, level);
        break;
      case Contact::Kind::None:
        break;
    }
  }
  if (s.phase == Phase::Playing) {
    s.ball.pos.x += s.ball.vel.x * remaining;
    s.ball.pos.y += s.ball.vel.y * remaining;
  }
}

bool strictly_inside(const Vec2& p, const Box& b) {
  return p.x > b.x0 && p.x < b.x1 && p.y > b.y0 && p.y < b.y1;
}

} // namespace

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Serving: return "serving";
    case Phase::Playing: return "playing";
    case Phase::GameOver: return "game_over";
  }
  return "unknown";
}

Level default_level() {
  Level level;
  level.name = "five-scenes";
  level.rows = 10;
  level.cols = 10;
  level.bands = {
      {{8, 9}, Background::Sky},    {{6, 7}, Background::Mud},
      {{4, 5}, Background::Honey},  {{2, 3}, Background::Pebble},
      {{0, 1}, Background::Asphalt},
  };
  return level;
}

void validate(const Level& level) {
  if (level.rows < 1 || level.rows > 64) {
    throw ConfigError("Level.rows in [1, 64]", "rows = " + std::to_string(level.rows), "/rows");
  }
  if (level.cols < 1 || level.cols > 64) {
    throw ConfigError("Level.cols in [1, 64]", "cols = " + std::to_string(level.cols), "/cols");
  }
  if (level.bands.empty()) throw ConfigError("Level.bands is non-empty", "no bands", "/bands");
  std::vector<int> owner(static_cast<std::size_t>(level.rows), -1);
  for (std::size_t b = 0; b < level.bands.size(); ++b) {
    const std::string ptr = "/bands/" + std::to_string(b);
    if (level.bands[b].rows.empty()) {
      throw ConfigError("Level band has rows", "empty band", ptr + "/rows");
    }
    for (std::size_t k = 0; k < level.bands[b].rows.size(); ++k) {
      const int row = level.bands[b].rows[k];
      const std::string rptr = ptr + "/rows/" + std::to_string(k);
      if (row < 0 || row >= level.rows) {
        throw ConfigError("Level band rows in [0, rows)", "row " + std::to_string(row), rptr);
      }
      if (owner[static_cast<std::size_t>(row)] != -1) {
        throw ConfigError("Level row belongs to exactly one band",
                          "row " + std::to_string(row) + " listed twice", rptr);
      }
      owner[static_cast<std::size_t>(row)] = static_cast<int>(b);
    }
  }
  for (int row = 0; row < level.rows; ++row) {
    if (owner[static_cast<std::size_t>(row)] == -1) {
      throw ConfigError("Level row belongs to exactly one band",
                        "row " + std::to_string(row) + " has no band", "/bands");
    }
  }
}

void validate(const GameConfig& c, const Level& level) {
  validate(level);
  auto require = [](bool ok, const char* invariant, const std::string& detail, const char* ptr) {
    if (!ok) throw ConfigError(invariant, detail, ptr);
  };
  auto finite_pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  require(std::isfinite(c.dial_gain), "GameConfig.k_dial is finite", std::to_string(c.dial_gain),
          "/k_dial");
  require(finite_pos(c.paddle_width) && c.paddle_width < 1.0, "GameConfig.paddle_width in (0, 1)",
          std::to_string(c.paddle_width), "/paddle_width");
  require(finite_pos(c.paddle_height), "GameConfig.paddle_height > 0",
          std::to_string(c.paddle_height), "/paddle_height");
  require(finite_pos(c.ball_radius) && c.ball_radius < 0.1, "GameConfig.ball_radius in (0, 0.1)",
          std::to_string(c.ball_radius), "/ball_radius");
  require(c.paddle_y + c.paddle_height < 1.0, "GameConfig paddle inside playfield",
          std::to_string(c.paddle_y), "/paddle_y");
  require(finite_pos(c.ball_speed), "GameConfig.ball_speed > 0", std::to_string(c.ball_speed),
          "/ball_speed");
  require(c.max_ball_speed >= c.ball_speed && std::isfinite(c.max_ball_speed),
          "GameConfig.max_ball_speed >= ball_speed", std::to_string(c.max_ball_speed),
          "/max_ball_speed");
  // A ball faster than its own diameter per tick is still handled by the
  // continuous sweep, but keep it well inside the playfield scale.
  require(c.max_ball_speed * kTickSeconds < 0.25, "GameConfig.max_ball_speed * dt < 0.25",
          std::to_string(c.max_ball_speed), "/max_ball_speed");
  require(c.paddle_speedup >= 1.0 && std::isfinite(c.paddle_speedup),
          "GameConfig.paddle_speedup >= 1", std::to_string(c.paddle_speedup), "/paddle_speedup");
  require(c.max_bounce_angle > 0.0 && c.max_bounce_angle < std::numbers::pi / 2,
          "GameConfig.max_bounce_angle in (0, 90) deg", std::to_string(c.max_bounce_angle),
          "/max_bounce_deg");
  require(c.serve_angle >= 0.0 && c.serve_angle < std::numbers::pi / 2,
          "GameConfig.serve_angle in [0, 90) deg", std::to_string(c.serve_angle), "/serve_angle_deg");
  require(c.serve_delay_ticks >= 1, "GameConfig.serve_delay_ticks >= 1",
          std::to_string(c.serve_delay_ticks), "/serve_delay_ticks");
  require(c.lives >= 1, "GameConfig.lives >= 1", std::to_string(c.lives), "/lives");
  require(c.brick_top > c.ball_radius && c.brick_bottom > c.brick_top,
          "GameConfig 2r < brick_top < brick_bottom", std::to_string(c.brick_top), "/brick_top");
  require(c.brick_bottom + 2.0 * c.ball_radius < c.paddle_y, "GameConfig bricks above the paddle",
          std::to_string(c.brick_bottom), "/brick_bottom");
}

double paddle_position(double dial_theta, const GameConfig& cfg) noexcept {
  return std::clamp(0.5 + cfg.dial_gain * dial_theta, 0.0, 1.0);
}

Vec2 serve_position(double paddle_x, const GameConfig& cfg) noexcept {
  return {std::clamp(paddle_x, cfg.ball_radius, 1.0 - cfg.ball_radius),
          cfg.paddle_y - cfg.ball_radius};
}

Box brick_box(int index, const GameState& s, const GameConfig& cfg) {
  const int row = index / s.cols;
  const int col = index % s.cols;
  const double w = 1.0 / s.cols;
  const double h = (cfg.brick_bottom - cfg.brick_top) / s.rows;
  const double r = cfg.ball_radius;
  return {col * w - r, cfg.brick_top + row * h - r, (col + 1) * w + r,
          cfg.brick_top + (row + 1) * h + r};
}

Box paddle_box(double paddle_x, const GameConfig& cfg) {
  const double half = 0.5 * cfg.paddle_width + cfg.ball_radius;
  return {paddle_x - half, cfg.paddle_y - cfg.ball_radius, paddle_x + half,
          cfg.paddle_y + cfg.paddle_height + cfg.ball_radius};
}

Vec2 reflect(Vec2 vel, Axis axis) noexcept {
  if (axis == Axis::X) vel.x = -vel.x;
  else vel.y = -vel.y;
  return vel;
}

Vec2 paddle_bounce(const Ball& ball, double paddle_x, Axis axis, const GameConfig& cfg) {
  if (axis == Axis::X || ball.vel.y <= 0.0) return reflect(ball.vel, axis);
  const double reach = 0.5 * cfg.paddle_width + cfg.ball_radius;
  const double offset = std::clamp((ball.pos.x - paddle_x) / reach, -1.0, 1.0);
  const double angle = offset * cfg.max_bounce_angle;
  const double speed =
      std::min(std::hypot(ball.vel.x, ball.vel.y) * cfg.paddle_speedup, cfg.max_ball_speed);
  return {speed * std::sin(angle), -speed * std::cos(angle)};
}

void lose_ball(GameState& s, const GameConfig& cfg) {
  s.lives = std::max(0, s.lives - 1);
  s.ball.vel = {};
  if (s.lives == 0) {
    s.phase = Phase::GameOver;
    return;
  }
  s.phase = Phase::Serving;
  s.serve_timer = cfg.serve_delay_ticks;
  s.ball.pos = serve_position(s.paddle_x, cfg);
}

void destroy_brick(GameState& s, int index, const Level& level) {
  auto& cell = s.alive[static_cast<std::size_t>(index)];
  if (!cell) return;
  cell = 0;
  ++s.destroyed;
  s.score += kPointsPerBrick;
  s.last_destroyed = index;
  s.background = background_for_level(level, s);
  if (s.bricks_alive() == 0) {
    s.phase = Phase::GameOver;
    s.ball.vel = {};
  }
}

void launch(GameState& s, const GameConfig& cfg) {
  const double u = unit_uniform(s.rng_state);
  const double angle = (2.0 * u - 1.0) * cfg.serve_angle;
  s.ball.vel = {cfg.ball_speed * std::sin(angle), -cfg.ball_speed * std::cos(angle)};
  s.phase = Phase::Playing;
}

GameState new_game(const Level& level, const GameConfig& cfg, std::uint64_t seed) {
  validate(cfg, level);
  GameState s;
  s.rows = level.rows;
  s.cols = level.cols;
  s.alive.assign(static_cast<std::size_t>(level.rows * level.cols), 1);
  s.lives = cfg.lives;
  s.rng_seed = seed;
  s.rng_state = seed;
  s.phase = Phase::Serving;
  s.serve_timer = cfg.serve_delay_ticks;
  s.paddle_x = 0.5;
  s.ball.pos = serve_position(s.paddle_x, cfg);
  s.background = background_for_level(level, s);
  return s;
}

GameState game_tick(const GameState& state, double dial_theta, const Level& level,
                    const GameConfig& cfg) {
  GameState s = state;
  ++s.tick;
  s.paddle_x = paddle_position(dial_theta, cfg);

  switch (s.phase) {
    case Phase::GameOver:
      break;
    case Phase::Serving:
      s.ball.pos = serve_position(s.paddle_x, cfg);
      s.ball.vel = {};
      if (--s.serve_timer <= 0) {
        s.serve_timer = 0;
        launch(s, cfg);
      }
      break;
    case Phase::Playing: {
      // The paddle may have been swept into a descending ball.
      const Box pb = paddle_box(s.paddle_x, cfg);
      if (s.ball.vel.y > 0.0 && strictly_inside(s.ball.pos, pb)) {
        s.ball.vel = paddle_bounce(s.ball, s.paddle_x, Axis::Y, cfg);
        s.ball.pos.y = pb.y0;
      }
      advance_ball(s, level, cfg, kTickSeconds);
      break;
    }
  }
  return s;
}

Background background_for_level(const Level& level, const GameState& s) {
  const auto band_alive = [&](std::size_t b) {
    for (const int row : level.bands[b].rows) {
      for (int col = 0; col < s.cols; ++col) {
        if (s.alive[static_cast<std::size_t>(row * s.cols + col)]) return true;
      }
    }
    return false;
  };
  const auto band_of_row = [&](int row) -> std::size_t {
    for (std::size_t b = 0; b < level.bands.size(); ++b) {
      const auto& rows = level.bands[b].rows;
      if (std::find(rows.begin(), rows.end(), row) != rows.end()) return b;
    }
    return 0;
  };

  const std::size_t n = level.bands.size();
  std::size_t start = 0;
  if (s.last_destroyed >= 0) start = band_of_row(s.last_destroyed / s.cols);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t b = (start + k) % n;
    if (band_alive(b)) return level.bands[b].background;
  }
  return level.bands[start].background;
}

std::uint64_t state_hash(const GameState& s) {
  StateHasher h;
  h.add(s.tick).add(static_cast<int>(s.phase)).add(s.score).add(s.lives).add(s.destroyed);
  h.add(static_cast<int>(s.background)).add(s.serve_timer).add(s.last_destroyed);
  h.add(s.rng_seed).add(s.rng_state).add(s.rows).add(s.cols);
  h.add_quantized(s.paddle_x);
  h.add_quantized(s.ball.pos.x).add_quantized(s.ball.pos.y);
  h.add_quantized(s.ball.vel.x).add_quantized(s.ball.vel.y);
  for (const auto cell : s.alive) h.add(static_cast<int>(cell));
  return h.value();
}

Level level_from_json(const nlohmann::json& j) {
  const std::string owner = "Level";
  Level level;
  if (j.is_object() && j.contains("name")) level.name = detail::string(j, "name", "", owner);
  level.rows = static_cast<int>(detail::integer(j, "rows", "", owner));
  level.cols = static_cast<int>(detail::integer(j, "cols", "", owner));
  const auto& bands = detail::require(j, "bands", "", owner);
  if (!bands.is_array()) throw ConfigError("Level.bands is an array", "got " + bands.dump(), "/bands");
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const std::string ptr = "/bands/" + std::to_string(b);
    const auto& entry = bands[b];
    Band band;
    const auto& rows = detail::require(entry, "rows", ptr, "Band");
    if (!rows.is_array()) throw ConfigError("Band.rows is an array", "got " + rows.dump(), ptr + "/rows");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (!rows[k].is_number_integer()) {
        throw ConfigError("Band.rows are integers", "got " + rows[k].dump(),
                          ptr + "/rows/" + std::to_string(k));
      }
      band.rows.push_back(rows[k].get<int>());
    }
    const std::string name = detail::string(entry, "background", ptr, "Band");
    const auto bg = effects::background_from_string(name);
    if (!bg) {
      throw ConfigError("Band.background is sky|mud|honey|pebble|asphalt", "got '" + name + "'",
                        ptr + "/background");
    }
    band.background = *bg;
    level.bands.push_back(std::move(band));
  }
  validate(level);
  return level;
}

nlohmann::json to_json(const Level& level) {
  nlohmann::json bands = nlohmann::json::array();
  for (const auto& b : level.bands) {
    bands.push_back({{"rows", b.rows}, {"background", std::string(effects::to_string(b.background))}});
  }
  return {{"name", level.name}, {"rows", level.rows}, {"cols", level.cols}, {"bands", bands}};
}

Level parse_level(std::string_view text, const std::string& source) {
  const auto j = detail::parse_text(text, source);
  try {
    return level_from_json(j);
  } catch (const ConfigError& e) {
    detail::rethrow_anchored(e, text, source);
  }
}

Level load_level(const std::string& path) { return parse_level(detail::read_file(path), path); }

GameConfig game_config_from_json(const nlohmann::json& j) {
  const std::string owner = "GameConfig";
  constexpr double deg = std::numbers::pi / 180.0;
  GameConfig c;
  c.dial_gain = detail::number_or(j, "k_dial", c.dial_gain, "", owner);
  c.paddle_width = detail::number_or(j, "paddle_width", c.paddle_width, "", owner);
  c.paddle_y = detail::number_or(j, "paddle_y", c.paddle_y, "", owner);
  c.paddle_height = detail::number_or(j, "paddle_height", c.paddle_height, "", owner);
  c.ball_radius = detail::number_or(j, "ball_radius", c.ball_radius, "", owner);
  c.ball_speed = detail::number_or(j, "ball_speed", c.ball_speed, "", owner);
  c.max_ball_speed = detail::number_or(j, "max_ball_speed", c.max_ball_speed, "", owner);
  c.paddle_speedup = detail::number_or(j, "paddle_speedup", c.paddle_speedup, "", owner);
  if (j.contains("max_bounce_deg")) {
    c.max_bounce_angle = detail::number(j, "max_bounce_deg", "", owner) * deg;
  }
  if (j.contains("serve_angle_deg")) {
    c.serve_angle = detail::number(j, "serve_angle_deg", "", owner) * deg;
  }
  c.serve_delay_ticks =
      static_cast<int>(detail::integer_or(j, "serve_delay_ticks", c.serve_delay_ticks, "", owner));
  c.lives = static_cast<int>(detail::integer_or(j, "lives", c.lives, "", owner));
  c.brick_top = detail::number_or(j, "brick_top", c.brick_top, "", owner);
  c.brick_bottom = detail::number_or(j, "brick_bottom", c.brick_bottom, "", owner);
  return c;
}

nlohmann::json to_json(const GameConfig& c) {
  constexpr double deg = 180.0 / std::numbers::pi;
  return {{"k_dial", c.dial_gain},
          {"paddle_width", c.paddle_width},
          {"paddle_y", c.paddle_y},
          {"paddle_height", c.paddle_height},
          {"ball_radius", c.ball_radius},
          {"ball_speed", c.ball_speed},
          {"max_ball_speed", c.max_ball_speed},
          {"paddle_speedup", c.paddle_speedup},
          {"max_bounce_deg", c.max_bounce_angle * deg},
          {"serve_angle_deg", c.serve_angle * deg},
          {"serve_delay_ticks", c.serve_delay_ticks},
          {"lives", c.lives},
          {"brick_top", c.brick_top},
          {"brick_bottom", c.brick_bottom}};
}

} // namespace mrdial::game
