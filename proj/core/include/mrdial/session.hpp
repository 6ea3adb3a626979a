#pragma once

// Real-time session: the coupled haptic/game simulation plus the message
// handling that exposes it to one client.
//
// Two nested fixed-rate clocks drive a session. The haptic loop runs at
// 1 kHz: render effect -> coil current -> fluid torque -> dial step. After
// haptic tick h completes, the game has advanced floor((h + 1) * 60 / 1000)
// ticks; each game tick samples the dial angle and may switch background,
// which re-selects the effect for the very next haptic tick.

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrdial/config.hpp"
#include "mrdial/dynamics.hpp"
#include "mrdial/effects.hpp"
#include "mrdial/game.hpp"
#include "mrdial/protocol.hpp"

namespace mrdial::service {

inline constexpr int kHapticRateHz = 1000;
inline constexpr int kGameRateHz = 60;
inline constexpr int kTraceDecimation = 10;  ///< 1 kHz -> 100 Hz, every 10th sample

/// Game ticks due once `haptic_ticks` haptic ticks have completed.
constexpr std::int64_t game_ticks_due(std::int64_t haptic_ticks) noexcept {
  return haptic_ticks * kGameRateHz / kHapticRateHz;
}

/// Headless simulation with no I/O. Deterministic in (config, input trace).
class Simulation {
public:
  explicit Simulation(const Config& config);

  /// Queues a rotation request; it is folded in at the next haptic tick.
  void add_input(double dial_delta);

  struct TickResult {
    int game_ticks = 0;               ///< 0 or 1 at the default rates
    bool background_changed = false;
    std::optional<protocol::TraceSample> trace;
  };

  TickResult tick();

  const Config& config() const noexcept { return config_; }
  const dynamics::DialState& dial() const noexcept { return dial_; }
  const game::GameState& game() const noexcept { return game_; }
  const effects::HapticEffect& effect() const noexcept { return effect_; }
  std::int64_t haptic_tick() const noexcept { return haptic_tick_; }
  double target_theta() const noexcept { return target_theta_; }
  double last_current() const noexcept { return last_current_; }
  double last_user_torque() const noexcept { return last_user_torque_; }
  /// Fluid torque (yield + viscous) at the latest tick, N*m.
  double resist_torque() const noexcept { return last_resist_; }

  std::uint64_t hash() const;

private:
  Config config_;
  dynamics::Rotor rotor_;
  dynamics::DialState dial_;
  game::GameState game_;
  effects::HapticEffect effect_;
  std::int64_t haptic_tick_ = 0;
  double pending_delta_ = 0.0;
  double target_theta_ = 0.0;
  double anchor_theta_ = 0.0;
  std::int64_t anchor_tick_ = 0;
  double last_current_ = 0.0;
  double last_user_torque_ = 0.0;
  double last_resist_ = 0.0;
};

/// Outgoing queue with trace backpressure: when more than `max_traces`
/// trace messages are waiting, the oldest trace is dropped. Snapshots and
/// control messages are never dropped.
class Outbox {
public:
  explicit Outbox(std::size_t max_traces) : max_traces_(max_traces) {}

  void push(protocol::Message message);
  std::optional<protocol::Message> pop();
  const protocol::Message* front() const;
  bool empty() const noexcept { return queue_.empty(); }
  std::size_t size() const noexcept { return queue_.size(); }
  std::size_t pending_traces() const noexcept { return traces_; }
  std::size_t dropped_traces() const noexcept { return dropped_; }

private:
  std::deque<protocol::Message> queue_;
  std::size_t max_traces_;
  std::size_t traces_ = 0;
  std::size_t dropped_ = 0;
};

class Session {
public:
  /// Validates the whole config first; throws ConfigError naming the
  /// failing invariant.
  static std::unique_ptr<Session> create(const Config& config);

  Session(const Config& config, std::string id);

  const std::string& id() const noexcept { return id_; }

  /// Decodes and handles one client frame. Malformed or unexpected frames
  /// produce an error reply and leave the simulation untouched; frames with
  /// seq <= the last accepted seq are ignored.
  void receive(std::string_view text);
  void handle(const protocol::Message& message);

  /// One haptic tick; queues snapshots (60 Hz) and traces (100 Hz samples).
  void tick();

  /// Queues a bye and marks the session closed.
  void close(const std::string& reason);

  bool closed() const noexcept { return closed_; }
  Outbox& outbox() noexcept { return outbox_; }
  const Simulation& simulation() const noexcept { return sim_; }
  std::int64_t last_client_seq() const noexcept { return last_client_seq_; }
  std::uint64_t hash() const { return sim_.hash(); }

  protocol::Snapshot snapshot() const;

private:
  void send(protocol::Payload payload);
  void send_error(const std::string& code, const std::string& message, std::int64_t ref_seq);

  std::string id_;
  Simulation sim_;
  Outbox outbox_;
  std::int64_t next_seq_ = 0;
  std::int64_t last_client_seq_ = -1;
  std::int64_t last_input_seq_ = -1;
  std::vector<protocol::TraceSample> pending_trace_;
  bool closed_ = false;
};

/// Byte transport carrying encoded frames. receive() never blocks; send()
/// returns false when the peer cannot take more right now.
class Transport {
public:
  virtual ~Transport() = default;
  virtual std::optional<std::string> receive() = 0;
  virtual bool send(const std::string& frame) = 0;
  virtual bool connected() const = 0;
};

/// In-process transport for headless runs and tests. Thread-safe: the loop
/// and a client may live on different threads.
class LocalTransport : public Transport {
public:
  std::optional<std::string> receive() override;
  bool send(const std::string& frame) override;
  bool connected() const override;

  // Client side.
  void client_send(std::string frame);
  void client_send(const protocol::Message& message);
  std::vector<std::string> client_drain();
  /// While false the transport refuses frames, as a stalled socket would.
  void set_client_reading(bool reading);
  void disconnect();

private:
  mutable std::mutex mu_;
  std::deque<std::string> to_server_;
  std::vector<std::string> to_client_;
  bool reading_ = true;
  bool connected_ = true;
};

struct RunOptions {
  bool real_time = false;
  /// Stop after this many haptic ticks; 0 runs until the session closes.
  std::int64_t max_ticks = 0;
  /// Torn down once the client has been gone or stalled this long.
  double idle_timeout_s = 10.0;
  /// Called before each haptic tick with the tick index (test hook).
  std::function<void(std::int64_t)> before_tick;
};

struct RunStats {
  std::int64_t haptic_ticks = 0;
  std::size_t frames_sent = 0;
  std::size_t snapshots_sent = 0;
  std::size_t trace_samples_sent = 0;
  std::size_t traces_dropped = 0;
  std::string end_reason;
};

/// Drives `session` over `transport`. With real_time the loop is paced to
/// the wall clock; otherwise it runs as fast as possible.
RunStats run_loop(Session& session, Transport& transport, const RunOptions& options);

} // namespace mrdial::service
