#include "mrdial/protocol.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "mrdial/errors.hpp"

namespace mrdial::protocol {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Payload field accessors; failures become bad_payload.
class Reader {
public:
  Reader(const json& obj, std::string where, std::int64_t seq)
      : obj_(obj), where_(std::move(where)), seq_(seq) {
    if (!obj_.is_object()) fail("is not an object");
  }

  const json& field(const char* key) const {
    const auto it = obj_.find(key);
    if (it == obj_.end()) fail(std::string("missing '") + key + "'");
    return *it;
  }
  double number(const char* key) const {
    const json& v = field(key);
    if (!v.is_number()) fail(std::string("'") + key + "' is not a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(std::string("'") + key + "' is not finite");
    return d;
  }
  std::int64_t integer(const char* key) const {
    const json& v = field(key);
    if (!v.is_number_integer()) fail(std::string("'") + key + "' is not an integer");
    return v.get<std::int64_t>();
  }
  std::string string(const char* key) const {
    const json& v = field(key);
    if (!v.is_string()) fail(std::string("'") + key + "' is not a string");
    return v.get<std::string>();
  }
  Reader object(const char* key) const { return Reader(field(key), where_ + "." + key, seq_); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ProtocolError("bad_payload", where_ + ": " + what, seq_);
  }

private:
  const json& obj_;
  std::string where_;
  std::int64_t seq_;
};

json dial_json(const dynamics::DialState& d) {
  return {{"theta", d.theta},
          {"omega", d.omega},
          {"mode", dynamics::to_string(d.mode)},
          {"current", d.current},
          {"tick", d.tick}};
}

json payload_json(const Payload& payload) {
  return std::visit(
      overloaded{
          [](const Hello& m) -> json {
            return {{"client", m.client},
                    {"device", m.device},
                    {"session_id", m.session_id},
                    {"version", m.version}};
          },
          [](const Input& m) -> json {
            return {{"dial_delta", m.dial_delta}, {"client_seq", m.client_seq}};
          },
          [](const Snapshot& m) -> json {
            json rows = json::array();
            for (int r = 0; r < m.rows; ++r) {
              std::string line;
              for (int c = 0; c < m.cols; ++c) {
                line += m.bricks[static_cast<std::size_t>(r * m.cols + c)] ? '1' : '0';
              }
              rows.push_back(std::move(line));
            }
            return {{"tick", m.tick},
                    {"game_tick", m.game_tick},
                    {"phase", std::string(game::to_string(m.phase))},
                    {"background", std::string(effects::to_string(m.background))},
                    {"score", m.score},
                    {"lives", m.lives},
                    {"paddle_x", m.paddle_x},
                    {"ball", {{"x", m.ball.pos.x}, {"y", m.ball.pos.y},
                              {"vx", m.ball.vel.x}, {"vy", m.ball.vel.y}}},
                    {"bricks", {{"rows", m.rows}, {"cols", m.cols}, {"alive", rows}}},
                    {"dial", dial_json(m.dial)},
                    {"t_resist", m.t_resist},
                    {"effect", effects::to_json(m.effect)},
                    {"ack_seq", m.ack_seq},
                    {"hash", m.hash}};
          },
          [](const Trace& m) -> json {
            json samples = json::array();
            for (const auto& s : m.samples) samples.push_back(json::array({s.tick, s.current, s.torque}));
            return {{"samples", samples}};
          },
          [](const Bye& m) -> json { return {{"reason", m.reason}}; },
          [](const Error& m) -> json {
            return {{"code", m.code}, {"message", m.message}, {"ref_seq", m.ref_seq}};
          },
      },
      payload);
}

game::Phase parse_phase(const Reader& r, const std::string& name) {
  for (const auto p : {game::Phase::Serving, game::Phase::Playing, game::Phase::GameOver}) {
    if (game::to_string(p) == name) return p;
  }
  r.fail("unknown phase '" + name + "'");
}

Snapshot parse_snapshot(const Reader& r) {
  Snapshot m;
  m.tick = r.integer("tick");
  m.game_tick = r.integer("game_tick");
  m.phase = parse_phase(r, r.string("phase"));
  const std::string bg = r.string("background");
  const auto background = effects::background_from_string(bg);
  if (!background) r.fail("unknown background '" + bg + "'");
  m.background = *background;
  m.score = static_cast<int>(r.integer("score"));
  m.lives = static_cast<int>(r.integer("lives"));
  m.paddle_x = r.number("paddle_x");

  const Reader ball = r.object("ball");
  m.ball.pos = {ball.number("x"), ball.number("y")};
  m.ball.vel = {ball.number("vx"), ball.number("vy")};

  const Reader bricks = r.object("bricks");
  const std::int64_t rows = bricks.integer("rows");
  const std::int64_t cols = bricks.integer("cols");
  if (rows < 0 || cols < 0 || rows > 1024 || cols > 1024) bricks.fail("bad grid size");
  m.rows = static_cast<int>(rows);
  m.cols = static_cast<int>(cols);
  const json& alive = bricks.field("alive");
  if (!alive.is_array() || alive.size() != static_cast<std::size_t>(rows)) {
    bricks.fail("'alive' must hold one string per row");
  }
  m.bricks.reserve(static_cast<std::size_t>(rows * cols));
  for (const auto& line : alive) {
    if (!line.is_string() || line.get_ref<const std::string&>().size() != static_cast<std::size_t>(cols)) {
      bricks.fail("'alive' rows must be strings of length cols");
    }
    for (const char ch : line.get_ref<const std::string&>()) {
      if (ch != '0' && ch != '1') bricks.fail("'alive' rows may only contain 0 and 1");
      m.bricks.push_back(ch == '1' ? 1 : 0);
    }
  }

  const Reader dial = r.object("dial");
  m.dial.theta = dial.number("theta");
  m.dial.omega = dial.number("omega");
  const std::string mode = dial.string("mode");
  if (mode == "stuck") m.dial.mode = dynamics::Mode::Stuck;
  else if (mode == "slipping") m.dial.mode = dynamics::Mode::Slipping;
  else dial.fail("unknown mode '" + mode + "'");
  m.dial.current = dial.number("current");
  m.dial.tick = dial.integer("tick");

  m.t_resist = r.number("t_resist");
  try {
    m.effect = effects::effect_from_json(r.field("effect"));
  } catch (const ConfigError& e) {
    r.fail(std::string("effect: ") + e.what());
  }
  m.ack_seq = r.integer("ack_seq");
  m.hash = r.string("hash");
  return m;
}

Payload parse_payload(const std::string& type, const json& body, std::int64_t seq) {
  const Reader r(body, type, seq);
  if (type == "hello") {
    Hello m;
    m.client = r.string("client");
    m.device = r.string("device");
    m.session_id = r.string("session_id");
    m.version = static_cast<int>(r.integer("version"));
    return m;
  }
  if (type == "input") {
    Input m;
    m.dial_delta = r.number("dial_delta");
    m.client_seq = r.integer("client_seq");
    return m;
  }
  if (type == "snapshot") return parse_snapshot(r);
  if (type == "trace") {
    Trace m;
    const json& samples = r.field("samples");
    if (!samples.is_array()) r.fail("'samples' is not an array");
    for (const auto& s : samples) {
      if (!s.is_array() || s.size() != 3 || !s[0].is_number_integer() || !s[1].is_number() ||
          !s[2].is_number()) {
        r.fail("samples must be [tick, current_A, torque_Nm]");
      }
      m.samples.push_back({s[0].get<std::int64_t>(), s[1].get<double>(), s[2].get<double>()});
    }
    return m;
  }
  if (type == "bye") return Bye{r.string("reason")};
  if (type == "error") {
    Error m;
    m.code = r.string("code");
    m.message = r.string("message");
    m.ref_seq = r.integer("ref_seq");
    return m;
  }
  throw ProtocolError("unknown_type", "unknown message type '" + type + "'", seq);
}

} // namespace

std::string_view type_name(const Payload& payload) noexcept {
  static constexpr std::string_view names[] = {"hello", "input", "snapshot", "trace", "bye", "error"};
  return names[payload.index()];
}

std::string encode(const Message& message) {
  const json envelope = {{"type", std::string(type_name(message.payload))},
                         {"seq", message.seq},
                         {"payload", payload_json(message.payload)}};
  return envelope.dump();
}

Message decode(std::string_view text) {
  json envelope;
  try {
    envelope = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ProtocolError("malformed_json", e.what());
  }
  if (!envelope.is_object()) throw ProtocolError("bad_envelope", "envelope is not an object");

  std::int64_t seq = -1;
  const auto seq_it = envelope.find("seq");
  if (seq_it == envelope.end() || !seq_it->is_number_integer() || seq_it->get<std::int64_t>() < 0) {
    throw ProtocolError("bad_envelope", "'seq' must be a non-negative integer");
  }
  seq = seq_it->get<std::int64_t>();

  const auto type_it = envelope.find("type");
  if (type_it == envelope.end() || !type_it->is_string()) {
    throw ProtocolError("bad_envelope", "'type' must be a string", seq);
  }
  const auto payload_it = envelope.find("payload");
  if (payload_it == envelope.end() || !payload_it->is_object()) {
    throw ProtocolError("bad_envelope", "'payload' must be an object", seq);
  }
  return Message{seq, parse_payload(type_it->get<std::string>(), *payload_it, seq)};
}

} // namespace mrdial::protocol
