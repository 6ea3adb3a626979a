#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mrdial/errors.hpp"
#include "mrdial/game.hpp"
#include "support/ref_stepper.hpp"

using namespace mrdial;
using namespace mrdial::game;

namespace {

const Level kLevel = default_level();
const GameConfig kCfg;

// Scripted dial angle for tick k: a slow sweep with a faster wobble.
double scripted_theta(int k) { return 2.2 * std::sin(k / 29.0) + 0.8 * std::sin(k / 7.0); }

GameState playing_ball(Vec2 pos, Vec2 vel) {
  GameState s = new_game(kLevel, kCfg, 1);
  s.phase = Phase::Playing;
  s.serve_timer = 0;
  s.ball = {pos, vel};
  return s;
}

void clear_rows(GameState& s, const std::vector<int>& rows, const Level& level) {
  for (const int row : rows) {
    for (int col = 0; col < s.cols; ++col) destroy_brick(s, row * s.cols + col, level);
  }
}

} // namespace

TEST(Serve, OnlyPaddleMovesWhileServing) {
  GameState s = new_game(kLevel, kCfg, 42);
  for (int k = 0; k < kCfg.serve_delay_ticks - 1; ++k) {
    const double theta = 0.7 * std::sin(k * 0.3);
    s = game_tick(s, theta, kLevel, kCfg);
    ASSERT_EQ(s.phase, Phase::Serving);
    EXPECT_EQ(s.paddle_x, paddle_position(theta, kCfg));
    EXPECT_EQ(s.ball.pos, serve_position(s.paddle_x, kCfg));
    EXPECT_EQ(s.ball.vel, Vec2{});
    EXPECT_EQ(s.destroyed, 0);
  }
  s = game_tick(s, 0.0, kLevel, kCfg);
  EXPECT_EQ(s.phase, Phase::Playing);
  EXPECT_LT(s.ball.vel.y, 0.0);
  EXPECT_NEAR(std::hypot(s.ball.vel.x, s.ball.vel.y), kCfg.ball_speed, 1e-12);
}

TEST(Serve, LaunchAngleWithinServeCone) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GameState s = new_game(kLevel, kCfg, seed);
    launch(s, kCfg);
    EXPECT_LE(std::abs(std::atan2(s.ball.vel.x, -s.ball.vel.y)), kCfg.serve_angle + 1e-12);
  }
}

TEST(Walls, StraightIntoWallReflects) {
  GameState s = playing_ball({0.015, 0.6}, {-0.7, 0.0});
  s = game_tick(s, 0.0, kLevel, kCfg);
  EXPECT_EQ(s.ball.vel.x, 0.7);
  EXPECT_EQ(s.ball.vel.y, 0.0);
  EXPECT_GE(s.ball.pos.x, kCfg.ball_radius);

  s = playing_ball({0.985, 0.6}, {0.7, 0.0});
  s = game_tick(s, 0.0, kLevel, kCfg);
  EXPECT_EQ(s.ball.vel.x, -0.7);

  GameState top = playing_ball({0.5, 0.02}, {0.0, -0.7});
  std::fill(top.alive.begin(), top.alive.end(), 0);
  top.destroyed = 100;
  top.phase = Phase::Playing;
  top = game_tick(top, 0.0, kLevel, kCfg);
  EXPECT_EQ(top.ball.vel.y, 0.7);
}

TEST(Bricks, HitFromBelowReflectsAndScores) {
  // Bottom brick row spans y in [0.35, 0.38]; column 4 spans x in [0.4, 0.5].
  GameState s = playing_ball({0.45, 0.40}, {0.0, -0.9});
  s = game_tick(s, 0.0, kLevel, kCfg);
  EXPECT_EQ(s.destroyed, 1);
  EXPECT_EQ(s.score, kPointsPerBrick);
  EXPECT_EQ(s.alive[9 * 10 + 4], 0);
  EXPECT_EQ(s.last_destroyed, 94);
  EXPECT_GT(s.ball.vel.y, 0.0);
}

TEST(Paddle, OffsetSetsBounceAngle) {
  const double px = 0.5;
  const Ball centre{{px, kCfg.paddle_y - kCfg.ball_radius}, {0.0, 0.7}};
  const Vec2 v0 = paddle_bounce(centre, px, Axis::Y, kCfg);
  EXPECT_NEAR(v0.x, 0.0, 1e-15);
  EXPECT_LT(v0.y, 0.0);

  const double reach = 0.5 * kCfg.paddle_width + kCfg.ball_radius;
  const Ball edge{{px + reach, kCfg.paddle_y - kCfg.ball_radius}, {0.0, 0.7}};
  const Vec2 v1 = paddle_bounce(edge, px, Axis::Y, kCfg);
  EXPECT_NEAR(std::atan2(v1.x, -v1.y), kCfg.max_bounce_angle, 1e-12);
  EXPECT_NEAR(std::hypot(v1.x, v1.y), 0.7 * kCfg.paddle_speedup, 1e-12);
}

TEST(Paddle, ClampAffineInDialAngle) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  GameState s = new_game(kLevel, kCfg, 3);
  for (int k = 0; k < 2000; ++k) {
    const double theta = u(rng);
    s = game_tick(s, theta, kLevel, kCfg);
    ASSERT_EQ(s.paddle_x, std::clamp(0.5 + kCfg.dial_gain * theta, 0.0, 1.0));
  }
  EXPECT_EQ(paddle_position(2 * std::numbers::pi * 0.5, kCfg), 1.0);
}

TEST(Invariants, SpeedBoundsScoreAndBrickCount) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GameState s = new_game(kLevel, kCfg, seed);
    double theta = 0.0;
    for (int k = 0; k < 6000 && s.phase != Phase::GameOver; ++k) {
      theta += 0.05 * u(rng);
      s = game_tick(s, theta, kLevel, kCfg);
      int alive = 0;
      for (auto c : s.alive) alive += c;
      ASSERT_EQ(alive + s.destroyed, s.rows * s.cols);
      ASSERT_EQ(s.score, kPointsPerBrick * s.destroyed);
      ASSERT_GE(s.score, 0);
      if (s.phase == Phase::Playing) {
        const double speed = std::hypot(s.ball.vel.x, s.ball.vel.y);
        ASSERT_GE(speed, kCfg.ball_speed - 1e-12);
        ASSERT_LE(speed, kCfg.max_ball_speed + 1e-12);
        ASSERT_GE(s.ball.pos.x, kCfg.ball_radius - 1e-12);
        ASSERT_LE(s.ball.pos.x, 1.0 - kCfg.ball_radius + 1e-12);
        ASSERT_GE(s.ball.pos.y, kCfg.ball_radius - 1e-12);
      }
    }
  }
}

TEST(Determinism, SameSeedAndInputsSameHashEveryTick) {
  GameState a = new_game(kLevel, kCfg, 42), b = new_game(kLevel, kCfg, 42);
  for (int k = 0; k < 3000; ++k) {
    a = game_tick(a, scripted_theta(k), kLevel, kCfg);
    b = game_tick(b, scripted_theta(k), kLevel, kCfg);
    ASSERT_EQ(state_hash(a), state_hash(b)) << "tick " << k;
  }
  EXPECT_EQ(a, b);
}

TEST(Determinism, SeedChangesTheGame) {
  GameState a = new_game(kLevel, kCfg, 42), b = new_game(kLevel, kCfg, 43);
  for (int k = 0; k < 100; ++k) {
    a = game_tick(a, 0.0, kLevel, kCfg);
    b = game_tick(b, 0.0, kLevel, kCfg);
  }
  EXPECT_NE(state_hash(a), state_hash(b));
}

TEST(Oracle, ScriptedRunMatchesDenseSubstepReference) {
  GameState fast = new_game(kLevel, kCfg, 42);
  GameState ref = fast;
  for (int k = 0; k < 600; ++k) {
    fast = game_tick(fast, scripted_theta(k), kLevel, kCfg);
    ref = oracle::reference_tick(ref, scripted_theta(k), kLevel, kCfg, 10);
    ASSERT_EQ(fast.score, ref.score) << "tick " << k;
    ASSERT_EQ(fast.lives, ref.lives) << "tick " << k;
    ASSERT_EQ(fast.alive, ref.alive) << "tick " << k;
    ASSERT_NEAR(fast.ball.pos.x, ref.ball.pos.x, 1e-9) << "tick " << k;
    ASSERT_NEAR(fast.ball.pos.y, ref.ball.pos.y, 1e-9) << "tick " << k;
  }
  EXPECT_EQ(fast.score, 40);
  EXPECT_EQ(fast.lives, 1);
  EXPECT_EQ(fast.background, Background::Sky);
}

TEST(Lives, NoInputRunEndsInGameOver) {
  GameState s = new_game(kLevel, kCfg, 42);
  int prev_lives = s.lives;
  for (int k = 0; k < 60 * 600 && s.phase != Phase::GameOver; ++k) {
    s = game_tick(s, 3.0, kLevel, kCfg);
    ASSERT_LE(s.lives, prev_lives);
    prev_lives = s.lives;
  }
  EXPECT_EQ(s.phase, Phase::GameOver);
  EXPECT_EQ(s.lives, 0);
}

TEST(Lives, LosingBallReturnsToServe) {
  GameState s = playing_ball({0.1, 1.0}, {0.0, 1.0});
  s = game_tick(s, 0.0, kLevel, kCfg);
  EXPECT_EQ(s.lives, kCfg.lives - 1);
  EXPECT_EQ(s.phase, Phase::Serving);
  EXPECT_EQ(s.serve_timer, kCfg.serve_delay_ticks);
}

TEST(Lives, ClearingEveryBrickEndsTheGame) {
  GameState s = new_game(kLevel, kCfg, 1);
  for (int i = 0; i < s.rows * s.cols; ++i) destroy_brick(s, i, kLevel);
  EXPECT_EQ(s.phase, Phase::GameOver);
  EXPECT_EQ(s.score, 1000);
}

TEST(Background, FreshLevelIsSky) {
  EXPECT_EQ(new_game(kLevel, kCfg, 7).background, Background::Sky);
  EXPECT_EQ(background_for_level(kLevel, new_game(kLevel, kCfg, 7)), Background::Sky);
}

TEST(Background, FollowsLastDestroyedBrick) {
  GameState s = new_game(kLevel, kCfg, 7);
  destroy_brick(s, 2 * 10 + 3, kLevel);  // pebble band
  EXPECT_EQ(s.background, Background::Pebble);
  destroy_brick(s, 7 * 10 + 0, kLevel);  // mud band
  EXPECT_EQ(s.background, Background::Mud);
}

TEST(Background, ClearingBandsWalksTheScenes) {
  GameState s = new_game(kLevel, kCfg, 7);
  clear_rows(s, {8, 9}, kLevel);
  EXPECT_EQ(s.background, Background::Mud);
  clear_rows(s, {6, 7}, kLevel);
  EXPECT_EQ(s.background, Background::Honey);
  clear_rows(s, {4, 5}, kLevel);
  EXPECT_EQ(s.background, Background::Pebble);
  clear_rows(s, {2, 3}, kLevel);
  EXPECT_EQ(s.background, Background::Asphalt);
}

TEST(Background, SingleBandIsConstant) {
  const Level one{"one", 3, 4, {{{0, 1, 2}, Background::Honey}}};
  GameState s = new_game(one, kCfg, 9);
  EXPECT_EQ(s.background, Background::Honey);
  for (int i = 0; i < 11; ++i) {
    destroy_brick(s, i, one);
    EXPECT_EQ(s.background, Background::Honey);
  }
}

TEST(Hash, QuantizedToNanoGrid) {
  GameState a = new_game(kLevel, kCfg, 5);
  GameState b = a;
  b.ball.pos.x += 1e-13;
  EXPECT_EQ(state_hash(a), state_hash(b));
  b.ball.pos.x += 1e-8;
  EXPECT_NE(state_hash(a), state_hash(b));
}

TEST(LevelFile, DefaultRoundTrips) {
  EXPECT_EQ(level_from_json(to_json(kLevel)), kLevel);
  EXPECT_EQ(load_level(MRDIAL_DATA_DIR "/default_level.json"), kLevel);
}

TEST(LevelFile, MalformedLevelsRejected) {
  const char* bad[] = {
      R"({"rows": 2, "cols": 4})",
      R"({"rows": 2, "cols": 4, "bands": []})",
      R"({"rows": 2, "cols": 4, "bands": [{"rows": [0, 1], "background": "lava"}]})",
      R"({"rows": 2, "cols": 4, "bands": [{"rows": [0, 2], "background": "sky"}]})",
      R"({"rows": 2, "cols": 4, "bands": [{"rows": [0], "background": "sky"}]})",
      R"({"rows": 2, "cols": 4, "bands": [{"rows": [0, 1], "background": "sky"},
                                          {"rows": [1], "background": "mud"}]})",
      R"({"rows": 0, "cols": 4, "bands": [{"rows": [0], "background": "sky"}]})",
      R"({"rows": 2, "cols": 4, "bands": [{"rows": [0, 1]}]})",
  };
  for (const char* text : bad) EXPECT_THROW(parse_level(text), ConfigError) << text;
}

TEST(LevelFile, ErrorNamesLine) {
  const std::string text =
      "{\n"
      "  \"rows\": 2,\n"
      "  \"cols\": 4,\n"
      "  \"bands\": [\n"
      "    {\"rows\": [0], \"background\": \"sky\"},\n"
      "    {\"rows\": [7], \"background\": \"mud\"}\n"
      "  ]\n"
      "}\n";
  try {
    parse_level(text, "lvl.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 6u);
    EXPECT_NE(std::string(e.what()).find("lvl.json:6:"), std::string::npos) << e.what();
  }
}

TEST(Validate, GameConfig) {
  GameConfig c;
  c.max_ball_speed = 0.5;
  EXPECT_THROW(validate(c, kLevel), ConfigError);
  c = {};
  c.lives = 0;
  EXPECT_THROW(validate(c, kLevel), ConfigError);
  c = {};
  c.paddle_width = 1.5;
  EXPECT_THROW(validate(c, kLevel), ConfigError);
}
