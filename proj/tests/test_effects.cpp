#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mrdial/errors.hpp"
#include "mrdial/effects.hpp"
#include "mrdial/torque.hpp"

using namespace mrdial;
using namespace mrdial::effects;

namespace {

const EffectTable kTable = default_effect_table(1.0);

const ConstantResistance& constant(Background bg) {
  return std::get<ConstantResistance>(kTable[bg]);
}
const Vibration& vibration(Background bg) { return std::get<Vibration>(kTable[bg]); }

} // namespace

TEST(Mapping, FiveBackgroundsRoundTripByName) {
  ASSERT_EQ(kAllBackgrounds.size(), 5u);
  const char* names[] = {"sky", "mud", "honey", "pebble", "asphalt"};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(to_string(kAllBackgrounds[i]), names[i]);
    EXPECT_EQ(background_from_string(names[i]), kAllBackgrounds[i]);
  }
  EXPECT_FALSE(background_from_string("lava"));
}

TEST(Mapping, SkyFeelsWeakResistance) {
  ASSERT_TRUE(std::holds_alternative<ConstantResistance>(kTable[Background::Sky]));
  EXPECT_EQ(constant(Background::Sky).level, ResistanceLevel::Weak);
}

TEST(Mapping, MudFeelsStrongResistance) {
  ASSERT_TRUE(std::holds_alternative<ConstantResistance>(kTable[Background::Mud]));
  EXPECT_EQ(constant(Background::Mud).level, ResistanceLevel::Strong);
}

TEST(Mapping, HoneyFeelsVeryStrongResistance) {
  ASSERT_TRUE(std::holds_alternative<ConstantResistance>(kTable[Background::Honey]));
  EXPECT_EQ(constant(Background::Honey).level, ResistanceLevel::VeryStrong);
}

TEST(Mapping, PebbleRoughAsphaltFine) {
  ASSERT_TRUE(std::holds_alternative<Vibration>(kTable[Background::Pebble]));
  ASSERT_TRUE(std::holds_alternative<Vibration>(kTable[Background::Asphalt]));
  EXPECT_LT(vibration(Background::Pebble).frequency, vibration(Background::Asphalt).frequency);
  EXPECT_GT(vibration(Background::Pebble).amplitude, vibration(Background::Asphalt).amplitude);
}

TEST(Mapping, EffectForBackgroundIsTableLookup) {
  for (const Background bg : kAllBackgrounds) EXPECT_EQ(effect_for_background(bg, kTable), kTable[bg]);
}

TEST(Mapping, DefaultsScaleWithCoilRating) {
  const EffectTable t = default_effect_table(2.0);
  EXPECT_DOUBLE_EQ(std::get<ConstantResistance>(t[Background::Mud]).current, 1.1);
  EXPECT_DOUBLE_EQ(std::get<Vibration>(t[Background::Pebble]).amplitude, 1.2);
  EXPECT_NO_THROW(validate(t, 2.0));
}

TEST(Render, ConstantEveryTick) {
  const HapticEffect e = ConstantResistance{ResistanceLevel::Strong, 0.3};
  for (std::int64_t tick : {0, 1, 17, 999, 123456789}) EXPECT_EQ(render(e, tick, 1000.0, 1.0), 0.3);
}

TEST(Render, SquareWavePhase) {
  const HapticEffect e = Vibration{0.1, 0.4, 10.0, 0.5};
  EXPECT_DOUBLE_EQ(render(e, 0, 1000.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(render(e, 49, 1000.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(render(e, 50, 1000.0, 1.0), 0.1);
  EXPECT_DOUBLE_EQ(render(e, 99, 1000.0, 1.0), 0.1);
  EXPECT_DOUBLE_EQ(render(e, 100, 1000.0, 1.0), 0.5);
}

TEST(Render, DutyCycleFraction) {
  const HapticEffect e = Vibration{0.0, 1.0, 8.0, 0.25};
  int high = 0;
  for (int t = 0; t < 125; ++t) high += render(e, t, 1000.0, 1.0) > 0.5;
  EXPECT_NEAR(high, 125 / 4, 1);
}

TEST(Render, AlwaysWithinCoilLimits) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double i_max = 0.1 + u(rng);
    const HapticEffect e = i % 2 ? HapticEffect{ConstantResistance{ResistanceLevel::Weak, 2 * u(rng)}}
                                 : HapticEffect{Vibration{u(rng), 2 * u(rng), 1 + 100 * u(rng), u(rng) + 1e-3}};
    const double c = render(e, static_cast<std::int64_t>(u(rng) * 1e6), 1000.0, i_max);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, i_max);
  }
}

TEST(Render, PeriodicWhenPeriodIsWholeTicks) {
  for (const Background bg : {Background::Pebble, Background::Asphalt}) {
    const Vibration v = vibration(bg);
    // asphalt at 80 Hz repeats every 25 ticks (two cycles)
    const std::int64_t period = bg == Background::Pebble ? 125 : 25;
    for (std::int64_t t = 0; t < 3000; ++t) {
      ASSERT_EQ(render(v, t, 1000.0, 1.0), render(v, t + period, 1000.0, 1.0));
    }
  }
}

TEST(Render, SwitchTakesEffectOnNextTick) {
  const double mud = render(kTable[Background::Mud], 500, 1000.0, 1.0);
  const double pebble = render(kTable[Background::Pebble], 501, 1000.0, 1.0);
  EXPECT_NE(mud, pebble);
  EXPECT_EQ(pebble, render(kTable[Background::Pebble], 501, 1000.0, 1.0));
}

TEST(Ordering, SkyMudHoneyThroughTorqueStack) {
  const auto mat = magnetics::mrf140cg();
  const magnetics::CoilSpec coil;
  const geometry::BumpyGeometry geom;
  auto steady = [&](Background bg) {
    return torque::total_torque(geom, 0.0, render(kTable[bg], 0, 1000.0, coil.max_current_a), coil, mat)
        .total;
  };
  EXPECT_LT(steady(Background::Sky), steady(Background::Mud));
  EXPECT_LT(steady(Background::Mud), steady(Background::Honey));
}

TEST(Validate, RejectsOutOfRangeEffects) {
  EXPECT_THROW(validate(HapticEffect{ConstantResistance{ResistanceLevel::Weak, 1.2}}, 1.0), ConfigError);
  EXPECT_THROW(validate(HapticEffect{Vibration{0.6, 0.6, 8, 0.5}}, 1.0), ConfigError);
  EXPECT_THROW(validate(HapticEffect{Vibration{0.1, 0.1, 0, 0.5}}, 1.0), ConfigError);
  EXPECT_THROW(validate(HapticEffect{Vibration{0.1, 0.1, 8, 0}}, 1.0), ConfigError);
  EXPECT_THROW(validate(HapticEffect{Vibration{0.1, 0.1, 8, 1.5}}, 1.0), ConfigError);
  EXPECT_NO_THROW(validate(HapticEffect{Vibration{0.1, 0.1, 8, 1.0}}, 1.0));
}

TEST(Json, TableRoundTrip) {
  EXPECT_EQ(effect_table_from_json(to_json(kTable), 1.0), kTable);
}

TEST(Json, IncompleteTableRejected) {
  nlohmann::json j = to_json(kTable);
  j.erase("honey");
  EXPECT_THROW(effect_table_from_json(j, 1.0), ConfigError);
}

TEST(Json, UnknownBackgroundRejected) {
  nlohmann::json j = to_json(kTable);
  j["lava"] = j["sky"];
  EXPECT_THROW(effect_table_from_json(j, 1.0), ConfigError);
}

TEST(Json, BadEntryNamesItsPointer) {
  nlohmann::json j = to_json(kTable);
  j["pebble"]["amplitude"] = 5.0;
  try {
    effect_table_from_json(j, 1.0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer().rfind("/pebble", 0), 0u) << e.pointer();
  }
}
