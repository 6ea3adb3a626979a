#pragma once

// Random valid protocol messages for round-trip properties.

#include <cstdint>
#include <random>
#include <string>

#include "mrdial/protocol.hpp"

namespace mrdial::oracle {

class MessageGenerator {
public:
  explicit MessageGenerator(std::uint64_t seed) : rng_(seed) {}

  protocol::Message next() {
    protocol::Message m;
    m.seq = integer(0, 1'000'000'000);
    switch (integer(0, 5)) {
      case 0: m.payload = hello(); break;
      case 1: m.payload = protocol::Input{real(-10.0, 10.0), integer(0, 1'000'000)}; break;
      case 2: m.payload = snapshot(); break;
      case 3: m.payload = trace(); break;
      case 4: m.payload = protocol::Bye{text()}; break;
      default: m.payload = protocol::Error{text(), text(), integer(-1, 1'000'000)}; break;
    }
    return m;
  }

private:
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  // Mix of ordinary values, exact zeros, tiny and huge magnitudes.
  double real(double lo, double hi) {
    switch (integer(0, 9)) {
      case 0: return 0.0;
      case 1: return -0.0;
      case 2: return std::ldexp(real01() - 0.5, static_cast<int>(integer(-300, 300)));
      default: return lo + (hi - lo) * real01();
    }
  }
  double real01() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

  std::string text() {
    static constexpr const char* pieces[] = {"a", "Z", "0", " ", "\"", "\\", "/", "\n", "\t",
                                             "\x01", "é", "漢", "🙂", "{", "}", "session"};
    std::string s;
    const auto n = integer(0, 12);
    for (std::int64_t i = 0; i < n; ++i) s += pieces[integer(0, std::size(pieces) - 1)];
    return s;
  }

  protocol::Hello hello() {
    return {text(), integer(0, 1) ? "virtual" : text(), text(), static_cast<int>(integer(0, 3))};
  }

  effects::HapticEffect effect() {
    if (integer(0, 1)) {
      return effects::ConstantResistance{static_cast<effects::ResistanceLevel>(integer(0, 2)),
                                         real(0.0, 1.0)};
    }
    return effects::Vibration{real(0.0, 0.5), real(0.0, 0.5), 0.5 + real01() * 200.0,
                              0.01 + real01() * 0.99};
  }

  protocol::Snapshot snapshot() {
    protocol::Snapshot s;
    s.tick = integer(0, 1'000'000'000);
    s.game_tick = integer(0, 60'000'000);
    s.phase = static_cast<game::Phase>(integer(0, 2));
    s.background = static_cast<effects::Background>(integer(0, 4));
    s.score = static_cast<int>(integer(0, 10'000));
    s.lives = static_cast<int>(integer(0, 9));
    s.paddle_x = real01();
    s.ball.pos = {real01(), real(-0.1, 1.1)};
    s.ball.vel = {real(-2.0, 2.0), real(-2.0, 2.0)};
    s.rows = static_cast<int>(integer(0, 12));
    s.cols = static_cast<int>(integer(0, 12));
    s.bricks.resize(static_cast<std::size_t>(s.rows * s.cols));
    for (auto& b : s.bricks) b = static_cast<std::uint8_t>(integer(0, 1));
    s.dial.theta = real(-100.0, 100.0);
    s.dial.omega = real(-200.0, 200.0);
    s.dial.mode = static_cast<dynamics::Mode>(integer(0, 1));
    s.dial.current = real(0.0, 1.0);
    s.dial.tick = s.tick;
    s.t_resist = real(0.0, 3.0);
    s.effect = effect();
    s.ack_seq = integer(-1, 1'000'000);
    s.hash = text();
    return s;
  }

  protocol::Trace trace() {
    protocol::Trace t;
    const auto n = integer(0, 20);
    for (std::int64_t i = 0; i < n; ++i) {
      t.samples.push_back({integer(0, 1'000'000'000), real(0.0, 1.0), real(-3.0, 3.0)});
    }
    return t;
  }

  std::mt19937_64 rng_;
};

} // namespace mrdial::oracle
