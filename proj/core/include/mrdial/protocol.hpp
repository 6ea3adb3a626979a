#pragma once

// JSON wire protocol between the session server and its clients.
//
// Every frame is an envelope { "type": str, "seq": int, "payload": obj }.
// Field names are a fixed contract; see docs/protocol.md.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mrdial/dynamics.hpp"
#include "mrdial/effects.hpp"
#include "mrdial/game.hpp"

namespace mrdial::protocol {

inline constexpr int kProtocolVersion = 1;

struct Hello {
  std::string client;
  std::string device = "virtual";
  std::string session_id;  ///< empty from the client, assigned by the server
  int version = kProtocolVersion;

  friend bool operator==(const Hello&, const Hello&) = default;
};

struct Input {
  double dial_delta = 0.0;  ///< rad since the client's previous input
  std::int64_t client_seq = 0;

  friend bool operator==(const Input&, const Input&) = default;
};

struct Snapshot {
  std::int64_t tick = 0;       ///< haptic tick
  std::int64_t game_tick = 0;
  game::Phase phase = game::Phase::Serving;
  effects::Background background = effects::Background::Sky;
  int score = 0;
  int lives = 0;
  double paddle_x = 0.5;
  game::Ball ball;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> bricks;  ///< row-major, 1 = standing
  dynamics::DialState dial;
  double t_resist = 0.0;  ///< fluid torque the hand works against, N*m
  effects::HapticEffect effect;
  std::int64_t ack_seq = -1;  ///< last client seq applied
  std::string hash;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct TraceSample {
  std::int64_t tick = 0;
  double current = 0.0;  ///< A
  double torque = 0.0;   ///< N*m

  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

struct Trace {
  std::vector<TraceSample> samples;

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct Bye {
  std::string reason;

  friend bool operator==(const Bye&, const Bye&) = default;
};

struct Error {
  std::string code;
  std::string message;
  std::int64_t ref_seq = -1;

  friend bool operator==(const Error&, const Error&) = default;
};

using Payload = std::variant<Hello, Input, Snapshot, Trace, Bye, Error>;

struct Message {
  std::int64_t seq = 0;
  Payload payload;

  friend bool operator==(const Message&, const Message&) = default;
};

/// "hello", "input", "snapshot", "trace", "bye" or "error".
std::string_view type_name(const Payload& payload) noexcept;

/// Decoding failure. `code` is one of malformed_json, bad_envelope,
/// unknown_type, bad_payload; `seq` is the envelope seq when it was readable.
class ProtocolError : public std::runtime_error {
public:
  ProtocolError(std::string code, const std::string& message, std::int64_t seq = -1)
      : std::runtime_error(message), code_(std::move(code)), seq_(seq) {}
  const std::string& code() const noexcept { return code_; }
  std::int64_t seq() const noexcept { return seq_; }

private:
  std::string code_;
  std::int64_t seq_;
};

std::string encode(const Message& message);
Message decode(std::string_view text);

} // namespace mrdial::protocol
