#include <benchmark/benchmark.h>

#include "mrdial/config.hpp"
#include "mrdial/dynamics.hpp"
#include "mrdial/game.hpp"
#include "mrdial/geometry.hpp"
#include "mrdial/protocol.hpp"
#include "mrdial/session.hpp"
#include "mrdial/torque.hpp"

using namespace mrdial;

static void BM_TotalTorque(benchmark::State& state) {
  geometry::BumpyGeometry g;
  g.n_teeth = static_cast<int>(state.range(0));
  const magnetics::CoilSpec coil;
  const auto mat = magnetics::mrf140cg();
  double i = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(torque::total_torque(g, 3.0, i, coil, mat));
    i = i < 0.8 ? i + 1e-4 : 0.0;
  }
}
BENCHMARK(BM_TotalTorque)->Arg(0)->Arg(3)->Arg(5);

static void BM_DialStep(benchmark::State& state) {
  const Config cfg = default_config();
  const dynamics::Rotor rotor(cfg.plant());
  dynamics::DialState d;
  d.current = 0.3;
  double t = 0.0;
  for (auto _ : state) {
    d = dynamics::step(d, t, rotor);
    t = t > 0.3 ? -0.3 : t + 1e-3;
  }
  benchmark::DoNotOptimize(d);
}
BENCHMARK(BM_DialStep);

static void BM_GameTick(benchmark::State& state) {
  const Config cfg = default_config();
  game::GameState g = game::new_game(cfg.level, cfg.game, 7);
  double theta = 0.0;
  for (auto _ : state) {
    g = game::game_tick(g, theta, cfg.level, cfg.game);
    theta += 0.01;
    if (g.phase == game::Phase::GameOver) g = game::new_game(cfg.level, cfg.game, 7);
  }
}
BENCHMARK(BM_GameTick);

static void BM_SimulationTick(benchmark::State& state) {
  service::Simulation sim(default_config());
  for (auto _ : state) {
    sim.add_input(1e-3);
    benchmark::DoNotOptimize(sim.tick());
  }
}
BENCHMARK(BM_SimulationTick);

static void BM_SessionTick(benchmark::State& state) {
  auto session = service::Session::create(default_config());
  for (auto _ : state) {
    session->tick();
    while (session->outbox().pop()) {
    }
  }
}
BENCHMARK(BM_SessionTick);

static protocol::Message sample_snapshot() {
  service::Session session(default_config(), "bench");
  for (int i = 0; i < 100; ++i) session.tick();
  return protocol::Message{1, session.snapshot()};
}

static void BM_EncodeSnapshot(benchmark::State& state) {
  const protocol::Message m = sample_snapshot();
  for (auto _ : state) benchmark::DoNotOptimize(protocol::encode(m));
}
BENCHMARK(BM_EncodeSnapshot);

static void BM_DecodeSnapshot(benchmark::State& state) {
  const std::string text = protocol::encode(sample_snapshot());
  for (auto _ : state) benchmark::DoNotOptimize(protocol::decode(text));
}
BENCHMARK(BM_DecodeSnapshot);

static void BM_DecodeInput(benchmark::State& state) {
  const std::string text = protocol::encode({42, protocol::Input{0.0125, 41}});
  for (auto _ : state) benchmark::DoNotOptimize(protocol::decode(text));
}
BENCHMARK(BM_DecodeInput);
BENCHMARK_MAIN();
