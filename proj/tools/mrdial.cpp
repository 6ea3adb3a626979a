// mrdial: torque sweeps, geometry comparison, headless game runs and the
// session server.
//
// Exit codes: 0 ok, 1 runtime failure, 2 configuration/usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mrdial/config.hpp"
#include "mrdial/errors.hpp"
#include "mrdial/geometry.hpp"
#include "mrdial/hash.hpp"
#include "mrdial/headless.hpp"
#include "mrdial/session.hpp"
#include "mrdial/sweep.hpp"
#include "mrdial/torque.hpp"

#ifdef MRDIAL_HAVE_SERVER
#include "mrdial/net/ws_server.hpp"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

// Precedence: built-in defaults < config file < command-line flags.
mrdial::Config load(const CommonFlags& flags) {
  mrdial::Config cfg = flags.config_path.empty() ? mrdial::default_config()
                                                 : mrdial::load_config(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  mrdial::validate(cfg);
  return cfg;
}

// Writes to --out, or stdout when it is empty or "-".
void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + out + "'");
  file << text;
  if (!file) throw std::runtime_error("write to '" + out + "' failed");
}

int cmd_sweep(const CommonFlags& flags, const std::string& variable, double start, double stop,
              int steps, double current, double omega) {
  const mrdial::Config cfg = load(flags);
  const auto var = mrdial::sweep::variable_from_string(variable);
  if (!var) {
    throw mrdial::ConfigError("SweepSpec.variable is current|omega|n_teeth",
                              "got '" + variable + "'", "/variable");
  }
  mrdial::sweep::SweepSpec spec{*var, start, stop, steps, current, omega};
  const auto rows = mrdial::sweep::run_sweep(cfg, spec);
  std::ostringstream csv;
  mrdial::sweep::write_csv(csv, rows);
  emit(flags.out, csv.str());
  return kExitOk;
}

int cmd_compare(const CommonFlags& flags, std::optional<double> current, double omega) {
  using namespace mrdial;
  const Config cfg = load(flags);
  const double i = current.value_or(cfg.coil.max_current_a);
  const auto bumpy = cfg.geometry;
  const auto smooth = geometry::smooth_variant(bumpy);
  const auto tb = torque::total_torque(bumpy, omega, i, cfg.coil, cfg.material, cfg.friction);
  const auto ts = torque::total_torque(smooth, omega, i, cfg.coil, cfg.material, cfg.friction);
  const double ab = geometry::active_area(bumpy);
  const double as = geometry::active_area(smooth);
  nlohmann::json j = {
      {"current_a", i},
      {"omega_rad_s", omega},
      {"bumpy", {{"n_teeth", bumpy.n_teeth}, {"area_m2", ab}, {"t_yield", tb.yield},
                 {"t_viscous", tb.viscous}, {"t_total", tb.total}}},
      {"smooth", {{"n_teeth", 0}, {"area_m2", as}, {"t_yield", ts.yield},
                  {"t_viscous", ts.viscous}, {"t_total", ts.total}}},
      {"area_ratio", ab / as},
      {"t_yield_ratio", ts.yield > 0.0 ? nlohmann::json(tb.yield / ts.yield) : nlohmann::json()},
  };
  emit(flags.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_play(const CommonFlags& flags, const std::string& trace_path, const std::string& level_path,
             double max_seconds) {
  using namespace mrdial;
  Config cfg = load(flags);
  if (!level_path.empty()) {
    cfg.level = game::load_level(level_path);
    validate(cfg);
  }
  const headless::InputTrace trace =
      trace_path.empty() ? headless::InputTrace{} : headless::load_input_trace(trace_path);
  const auto max_ticks = static_cast<std::int64_t>(max_seconds * service::kHapticRateHz);
  const auto summary = headless::play(cfg, trace, max_ticks);
  emit(flags.out, headless::to_json(summary).dump(2) + "\n");
  return kExitOk;
}

int cmd_serve(const CommonFlags& flags, std::string addr, bool headless_run, double seconds) {
  using namespace mrdial;
  Config cfg = load(flags);
  if (addr.empty()) {
    if (const char* env = std::getenv("MRDIAL_ADDR")) addr = env;
    else addr = cfg.service.addr;
  }

  if (headless_run) {
    // One in-process session, paced as fast as possible.
    auto session = service::Session::create(cfg);
    service::LocalTransport transport;
    transport.client_send(protocol::Message{0, protocol::Hello{"headless", "virtual", "", 1}});
    service::RunOptions options;
    options.max_ticks = static_cast<std::int64_t>(seconds * service::kHapticRateHz);
    const auto stats = service::run_loop(*session, transport, options);
    nlohmann::json j = {{"session_id", session->id()},
                        {"haptic_ticks", stats.haptic_ticks},
                        {"frames", stats.frames_sent},
                        {"snapshots", stats.snapshots_sent},
                        {"trace_samples", stats.trace_samples_sent},
                        {"hash", hash_to_hex(session->hash())},
                        {"end", stats.end_reason}};
    emit(flags.out, j.dump(2) + "\n");
    return kExitOk;
  }

#ifdef MRDIAL_HAVE_SERVER
  const auto [host, port] = net::parse_addr(addr);
  net::ServerOptions options;
  options.host = host;
  options.port = port;
  options.handle_signals = true;
  net::WsServer server(cfg, options);
  const auto bound = server.start();
  std::cerr << "mrdial: serving ws://" << host << ":" << bound << options.path << std::endl;
  server.wait();
  std::cerr << "mrdial: stopped after " << server.total_sessions() << " session(s)" << std::endl;
  return kExitOk;
#else
  (void)seconds;
  std::cerr << "mrdial: built without the WebSocket server\n";
  return kExitRuntime;
#endif
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"mrdial: MR fluid haptic dial simulator"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "RNG seed (overrides the config)");
    sub->add_option("--out", flags.out, "Output path ('-' for stdout)");
  };

  auto* sweep = app.add_subcommand("sweep", "Torque sweep to CSV");
  add_common(sweep);
  std::string variable = "current";
  double start = 0.0, stop = 1.0, sweep_current = 0.5, sweep_omega = 0.0;
  int steps = 11;
  sweep->add_option("--var", variable, "current | omega | n_teeth")->capture_default_str();
  sweep->add_option("--start", start)->capture_default_str();
  sweep->add_option("--stop", stop)->capture_default_str();
  sweep->add_option("--steps", steps)->capture_default_str();
  sweep->add_option("--current", sweep_current, "Fixed coil current, A")->capture_default_str();
  sweep->add_option("--omega", sweep_omega, "Fixed shaft speed, rad/s")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Bumpy vs smooth geometry at one operating point");
  add_common(compare);
  std::optional<double> compare_current;
  double compare_omega = 0.0;
  compare->add_option("--current", compare_current, "Coil current, A (default i_max)");
  compare->add_option("--omega", compare_omega, "Shaft speed, rad/s")->capture_default_str();

  auto* play = app.add_subcommand("play", "Headless scripted game run; prints a JSON summary");
  add_common(play);
  std::string trace_path, level_path;
  double max_seconds = 600.0;
  play->add_option("--trace", trace_path, "Input trace file")->check(CLI::ExistingFile);
  play->add_option("--level", level_path, "Level JSON file")->check(CLI::ExistingFile);
  play->add_option("--max-seconds", max_seconds, "Simulated time limit")->capture_default_str();
  play->add_flag("--headless", "Accepted for symmetry; play is always headless");

  auto* serve = app.add_subcommand("serve", "Serve sessions over WebSocket at /session");
  add_common(serve);
  std::string addr;
  bool headless_run = false;
  double serve_seconds = 10.0;
  serve->add_option("--addr", addr, "HOST:PORT (env MRDIAL_ADDR, then config)");
  serve->add_flag("--headless", headless_run, "Run one in-process session instead of listening");
  serve->add_option("--seconds", serve_seconds, "Simulated seconds for --headless")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep) return cmd_sweep(flags, variable, start, stop, steps, sweep_current, sweep_omega);
    if (*compare) return cmd_compare(flags, compare_current, compare_omega);
    if (*play) return cmd_play(flags, trace_path, level_path, max_seconds);
    if (*serve) return cmd_serve(flags, addr, headless_run, serve_seconds);
  } catch (const mrdial::ConfigError& e) {
    std::cerr << "mrdial: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mrdial::InputError& e) {
    std::cerr << "mrdial: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "mrdial: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
