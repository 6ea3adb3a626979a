#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mrdial/errors.hpp"
#include "mrdial/magnetics.hpp"

using namespace mrdial;
using namespace mrdial::magnetics;

namespace {

CoilSpec ideal_coil() {
  CoilSpec c;
  c.turns = 300;
  c.coupling = 1.0;
  c.gap_length_m = 1e-3;
  c.max_current_a = 1.0;
  return c;
}

MaterialModel three_knot() {
  return {"test", 0.1, {{0, 0}, {100, 20e3}, {200, 50e3}}};
}

} // namespace

TEST(Field, ZeroCurrentGivesZeroField) { EXPECT_EQ(field_from_current(ideal_coil(), 0.0), 0.0); }

TEST(Field, FullCurrentAndHalf) {
  const CoilSpec c = ideal_coil();
  EXPECT_DOUBLE_EQ(field_from_current(c, 1.0), 300.0);
  EXPECT_EQ(field_from_current(c, 0.5), 0.5 * field_from_current(c, 1.0));
}

TEST(Field, HandEvaluatedRegression) {
  CoilSpec c;
  c.turns = 450;
  c.coupling = 0.8;
  c.gap_length_m = 2e-3;
  c.max_current_a = 2.0;
  EXPECT_NEAR(field_from_current(c, 1.5), 270.0, 1e-12);
}

TEST(Field, DoublingCurrentDoublesField) {
  const CoilSpec c;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, c.max_current_a / 2);
  for (int i = 0; i < 1000; ++i) {
    const double I = u(rng);
    EXPECT_DOUBLE_EQ(field_from_current(c, 2 * I), 2 * field_from_current(c, I));
  }
}

TEST(Field, OutOfRangeCurrentThrows) {
  const CoilSpec c = ideal_coil();
  EXPECT_THROW(field_from_current(c, -1e-9), RangeError);
  EXPECT_THROW(field_from_current(c, 1.0 + 1e-9), RangeError);
}

TEST(Field, CurrentForFieldInverts) {
  const CoilSpec c;
  EXPECT_NEAR(current_for_field(c, field_from_current(c, 0.37)), 0.37, 1e-15);
}

TEST(YieldStress, OriginInteriorAndSaturation) {
  const MaterialModel m = three_knot();
  EXPECT_EQ(yield_stress(m, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(yield_stress(m, 150.0), 35e3);
  EXPECT_DOUBLE_EQ(yield_stress(m, 500.0), 50e3);
}

TEST(YieldStress, NegativeFieldThrows) {
  EXPECT_THROW(yield_stress(three_knot(), -1.0), RangeError);
}

TEST(YieldStress, ExactAtEveryKnot) {
  const MaterialModel m = mrf140cg();
  for (const auto& k : m.curve) EXPECT_EQ(yield_stress(m, k.field_ka_m), k.yield_pa);
}

TEST(YieldStress, MonotoneForRandomCurves) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    MaterialModel m{"random", 0.1, {{0, 0}}};
    const int knots = 2 + static_cast<int>(u(rng) * 10);
    for (int k = 0; k < knots; ++k) {
      const auto& last = m.curve.back();
      m.curve.push_back({last.field_ka_m + 1.0 + 100 * u(rng), last.yield_pa + 1e4 * u(rng)});
    }
    validate(m);
    const double top = m.curve.back().field_ka_m * 1.5;
    for (int i = 0; i < 200; ++i) {
      double a = top * u(rng), b = top * u(rng);
      if (a > b) std::swap(a, b);
      EXPECT_LE(yield_stress(m, a), yield_stress(m, b));
    }
  }
}

TEST(YieldStress, FieldForYieldStressInverts) {
  const MaterialModel m = mrf140cg();
  for (double H : {0.0, 10.0, 60.0, 123.0, 399.0}) {
    EXPECT_NEAR(field_for_yield_stress(m, yield_stress(m, H)), H, 1e-9);
  }
  EXPECT_THROW(field_for_yield_stress(m, m.curve.back().yield_pa + 1.0), RangeError);
}

TEST(Validate, CoilInvariants) {
  CoilSpec c;
  c.max_current_a = 0.0;
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.invariant(), "CoilSpec.i_max > 0");
  }
  c = {};
  c.turns = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.coupling = 1.5;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.gap_length_m = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Validate, MaterialInvariants) {
  MaterialModel m = three_knot();
  m.viscosity_pa_s = 0.0;
  EXPECT_THROW(validate(m), ConfigError);
  m = three_knot();
  m.curve[0] = {1.0, 0.0};
  EXPECT_THROW(validate(m), ConfigError);
  m = three_knot();
  m.curve[2].field_ka_m = 100.0;
  EXPECT_THROW(validate(m), ConfigError);
  m = three_knot();
  m.curve[2].yield_pa = 10e3;
  EXPECT_THROW(validate(m), ConfigError);
}

TEST(MaterialFile, DataFileMatchesBuiltIn) {
  EXPECT_EQ(load_material(MRDIAL_DATA_DIR "/mrf140cg.json"), mrf140cg());
}

TEST(MaterialFile, KilopascalsConvertedOnLoad) {
  const MaterialModel m =
      parse_material(R"({"name": "x", "eta_pa_s": 0.2, "curve": [[0, 0], [100, 20]]})");
  EXPECT_EQ(m.curve[1].yield_pa, 20e3);
  EXPECT_EQ(nlohmann::json(to_json(m)), nlohmann::json::parse(
                                             R"({"name": "x", "eta_pa_s": 0.2, "curve": [[0.0, 0.0], [100.0, 20.0]]})"));
}

TEST(MaterialFile, ErrorsNameTheLine) {
  const std::string text =
      "{\n"
      "  \"name\": \"bad\",\n"
      "  \"eta_pa_s\": 0.3,\n"
      "  \"curve\": [\n"
      "    [0, 0],\n"
      "    [50, 10],\n"
      "    [40, 12]\n"
      "  ]\n"
      "}\n";
  try {
    parse_material(text, "bad.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_NE(std::string(e.what()).find("bad.json:7:"), std::string::npos) << e.what();
  }
}

TEST(MaterialFile, SyntaxErrorsNameTheLine) {
  try {
    parse_material("{\n  \"name\": \"x\",\n  \"eta_pa_s\": ,\n}", "broken.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(MaterialFile, NegativeViscosityRejectedAtItsLine) {
  try {
    parse_material("{\"name\": \"x\",\n\"eta_pa_s\": -1,\n\"curve\": [[0, 0], [1, 1]]}", "v.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}
