#include "mrdial/session.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "mrdial/errors.hpp"
#include "mrdial/hash.hpp"

namespace mrdial::service {

// ---------------------------------------------------------------- Simulation

Simulation::Simulation(const Config& config)
    : config_(config),
      rotor_(config.plant()),
      game_(game::new_game(config.level, config.game, config.seed)),
      effect_(effects::effect_for_background(game_.background, config.effects)) {}

void Simulation::add_input(double dial_delta) {
  if (!std::isfinite(dial_delta)) throw InputError("dial_delta must be finite");
  pending_delta_ += dial_delta;
}

Simulation::TickResult Simulation::tick() {
  TickResult result;
  const std::int64_t h = haptic_tick_;
  const double dt = config_.dial.dt;

  if (pending_delta_ != 0.0) {
    target_theta_ += pending_delta_;
    pending_delta_ = 0.0;
    anchor_theta_ = dial_.theta;
    anchor_tick_ = h;
  }

  const double current =
      effects::render(effect_, h, kHapticRateHz, config_.coil.max_current_a);
  dial_.current = current;

  const double window = static_cast<double>(h - anchor_tick_ + 1) * dt;
  const double user_torque = dynamics::apply_user_input(
      config_.input, target_theta_ - anchor_theta_, dial_.theta - anchor_theta_, window);

  const dynamics::StepReport report = dynamics::step_detailed(dial_, user_torque, rotor_);
  dial_ = report.state;
  last_current_ = current;
  last_user_torque_ = user_torque;
  last_resist_ = report.fluid.total;

  if (h % kTraceDecimation == 0) {
    result.trace = protocol::TraceSample{h, current, last_resist_};
  }

  haptic_tick_ = h + 1;
  const std::int64_t due = game_ticks_due(haptic_tick_);
  while (game_.tick < due) {
    const effects::Background before = game_.background;
    game_ = game::game_tick(game_, dial_.theta, config_.level, config_.game);
    ++result.game_ticks;
    if (game_.background != before) {
      effect_ = effects::effect_for_background(game_.background, config_.effects);
      result.background_changed = true;
    }
  }
  return result;
}

std::uint64_t Simulation::hash() const {
  StateHasher h;
  h.add(haptic_tick_);
  h.add_quantized(dial_.theta).add_quantized(dial_.omega).add_quantized(dial_.current);
  h.add(static_cast<int>(dial_.mode)).add(dial_.tick);
  h.add_quantized(target_theta_).add_quantized(pending_delta_);
  h.add(game::state_hash(game_));
  return h.value();
}

// -------------------------------------------------------------------- Outbox

void Outbox::push(protocol::Message message) {
  const bool is_trace = std::holds_alternative<protocol::Trace>(message.payload);
  queue_.push_back(std::move(message));
  if (!is_trace) return;
  ++traces_;
  while (traces_ > max_traces_) {
    for (auto it = queue_.begin(); it != queue_.end(); ++it) {
      if (std::holds_alternative<protocol::Trace>(it->payload)) {
        queue_.erase(it);
        --traces_;
        ++dropped_;
        break;
      }
    }
  }
}

std::optional<protocol::Message> Outbox::pop() {
  if (queue_.empty()) return std::nullopt;
  protocol::Message m = std::move(queue_.front());
  queue_.pop_front();
  if (std::holds_alternative<protocol::Trace>(m.payload)) --traces_;
  return m;
}

const protocol::Message* Outbox::front() const { return queue_.empty() ? nullptr : &queue_.front(); }

// ------------------------------------------------------------------- Session

namespace {

std::string random_token() {
  std::random_device rd;
  const std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return hash_to_hex(v).substr(2);
}

} // namespace

std::unique_ptr<Session> Session::create(const Config& config) {
  validate(config);
  return std::make_unique<Session>(config, random_token());
}

Session::Session(const Config& config, std::string id)
    : id_(std::move(id)), sim_(config), outbox_(config.service.max_pending_traces) {}

void Session::send(protocol::Payload payload) {
  outbox_.push(protocol::Message{next_seq_++, std::move(payload)});
}

void Session::send_error(const std::string& code, const std::string& message, std::int64_t ref_seq) {
  send(protocol::Error{code, message, ref_seq});
}

void Session::receive(std::string_view text) {
  protocol::Message message;
  try {
    message = protocol::decode(text);
  } catch (const protocol::ProtocolError& e) {
    send_error(e.code(), e.what(), e.seq());
    return;
  }
  handle(message);
}

void Session::handle(const protocol::Message& message) {
  if (closed_) return;
  if (message.seq <= last_client_seq_) return;  // stale or replayed

  if (const auto* input = std::get_if<protocol::Input>(&message.payload)) {
    last_client_seq_ = message.seq;
    last_input_seq_ = input->client_seq;
    sim_.add_input(input->dial_delta);
    return;
  }
  if (const auto* hello = std::get_if<protocol::Hello>(&message.payload)) {
    last_client_seq_ = message.seq;
    if (hello->version != protocol::kProtocolVersion) {
      send_error("unsupported_version",
                 "server speaks protocol version " + std::to_string(protocol::kProtocolVersion),
                 message.seq);
      return;
    }
    send(protocol::Hello{"mrdial-server", "virtual", id_, protocol::kProtocolVersion});
    return;
  }
  if (std::holds_alternative<protocol::Bye>(message.payload)) {
    last_client_seq_ = message.seq;
    close("client_bye");
    return;
  }
  if (std::holds_alternative<protocol::Error>(message.payload)) {
    last_client_seq_ = message.seq;
    return;  // clients may report problems; nothing to do
  }
  send_error("unexpected_type",
             "clients may not send '" + std::string(protocol::type_name(message.payload)) + "'",
             message.seq);
}

void Session::tick() {
  if (closed_) return;
  const Simulation::TickResult r = sim_.tick();
  if (r.trace) pending_trace_.push_back(*r.trace);
  for (int i = 0; i < r.game_ticks; ++i) {
    if (!pending_trace_.empty()) {
      send(protocol::Trace{std::move(pending_trace_)});
      pending_trace_.clear();
    }
    send(snapshot());
  }
}

void Session::close(const std::string& reason) {
  if (closed_) return;
  send(protocol::Bye{reason});
  closed_ = true;
}

protocol::Snapshot Session::snapshot() const {
  const game::GameState& g = sim_.game();
  protocol::Snapshot s;
  s.tick = sim_.haptic_tick();
  s.game_tick = g.tick;
  s.phase = g.phase;
  s.background = g.background;
  s.score = g.score;
  s.lives = g.lives;
  s.paddle_x = g.paddle_x;
  s.ball = g.ball;
  s.rows = g.rows;
  s.cols = g.cols;
  s.bricks = g.alive;
  s.dial = sim_.dial();
  s.t_resist = sim_.resist_torque();
  s.effect = sim_.effect();
  s.ack_seq = last_input_seq_;
  s.hash = hash_to_hex(sim_.hash());
  return s;
}

// ------------------------------------------------------------ LocalTransport

std::optional<std::string> LocalTransport::receive() {
  std::lock_guard lock(mu_);
  if (to_server_.empty()) return std::nullopt;
  std::string frame = std::move(to_server_.front());
  to_server_.pop_front();
  return frame;
}

bool LocalTransport::send(const std::string& frame) {
  std::lock_guard lock(mu_);
  if (!connected_ || !reading_) return false;
  to_client_.push_back(frame);
  return true;
}

bool LocalTransport::connected() const {
  std::lock_guard lock(mu_);
  return connected_;
}

void LocalTransport::client_send(std::string frame) {
  std::lock_guard lock(mu_);
  to_server_.push_back(std::move(frame));
}

void LocalTransport::client_send(const protocol::Message& message) {
  client_send(protocol::encode(message));
}

std::vector<std::string> LocalTransport::client_drain() {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  out.swap(to_client_);
  return out;
}

void LocalTransport::set_client_reading(bool reading) {
  std::lock_guard lock(mu_);
  reading_ = reading;
}

void LocalTransport::disconnect() {
  std::lock_guard lock(mu_);
  connected_ = false;
}

// ------------------------------------------------------------------ run_loop

RunStats run_loop(Session& session, Transport& transport, const RunOptions& options) {
  using clock = std::chrono::steady_clock;
  RunStats stats;
  const auto start = clock::now();
  double stalled_since = -1.0;  // < 0 while healthy

  auto now_seconds = [&] {
    if (options.real_time) return std::chrono::duration<double>(clock::now() - start).count();
    return static_cast<double>(stats.haptic_ticks) / kHapticRateHz;
  };

  // Returns false if the transport refused a frame.
  auto flush = [&] {
    while (const protocol::Message* m = session.outbox().front()) {
      if (!transport.send(protocol::encode(*m))) return false;
      ++stats.frames_sent;
      if (std::holds_alternative<protocol::Snapshot>(m->payload)) ++stats.snapshots_sent;
      if (const auto* t = std::get_if<protocol::Trace>(&m->payload)) {
        stats.trace_samples_sent += t->samples.size();
      }
      session.outbox().pop();
    }
    return true;
  };

  for (;;) {
    if (options.max_ticks > 0 && stats.haptic_ticks >= options.max_ticks) {
      stats.end_reason = "max_ticks";
      break;
    }
    if (options.before_tick) options.before_tick(session.simulation().haptic_tick());
    while (auto frame = transport.receive()) session.receive(*frame);
    if (session.closed()) {
      flush();
      stats.end_reason = "closed";
      break;
    }

    session.tick();
    ++stats.haptic_ticks;

    const bool drained = flush();
    if (!transport.connected() || !drained) {
      const double now = now_seconds();
      if (stalled_since < 0.0) stalled_since = now;
      if (now - stalled_since >= options.idle_timeout_s) {
        session.close("timeout");
        flush();
        stats.end_reason = "timeout";
        break;
      }
    } else {
      stalled_since = -1.0;
    }

    if (options.real_time) {
      std::this_thread::sleep_until(start + std::chrono::microseconds(1'000'000 / kHapticRateHz) *
                                                stats.haptic_ticks);
    }
  }
  stats.traces_dropped = session.outbox().dropped_traces();
  return stats;
}

} // namespace mrdial::service
