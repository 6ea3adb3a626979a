#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mrdial/errors.hpp"
#include "mrdial/geometry.hpp"

using namespace mrdial;
using namespace mrdial::geometry;
using std::numbers::pi;

namespace {

BumpyGeometry random_geometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BumpyGeometry g;
  g.base_radius_m = 2e-3 + 15e-3 * u(rng);
  g.n_teeth = static_cast<int>(u(rng) * 6);
  g.tooth_height_m = 0.5e-3 + 3e-3 * u(rng);
  g.tooth_width_m = 0.5e-3 + 5e-3 * u(rng);
  g.radial_gap_m = 0.1e-3 + 1e-3 * u(rng);
  g.axial_gap_m = 0.1e-3 + 1e-3 * u(rng);
  g.engagement_length_m = 1e-3 + 10e-3 * u(rng);
  g.housing_radius_m = 0.2;
  return g;
}

} // namespace

TEST(Surfaces, SmoothBaselineHasWallAndEndFace) {
  BumpyGeometry g;
  g.n_teeth = 0;
  const auto s = enumerate_surfaces(g);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].kind, SurfaceKind::Annulus);
  EXPECT_EQ(s[0].r_inner, 0.0);
  EXPECT_EQ(s[0].r_outer, 0.01);
  EXPECT_EQ(s[1].kind, SurfaceKind::Cylinder);
  EXPECT_DOUBLE_EQ(s[1].area, 2 * pi * 0.01 * 0.005);
  EXPECT_EQ(s[1].gap, g.radial_gap_m);
  EXPECT_EQ(s[0].gap, g.axial_gap_m);
}

TEST(Surfaces, OneToothAreasFrozen) {
  BumpyGeometry g;
  g.n_teeth = 1;
  const auto s = enumerate_surfaces(g);
  ASSERT_EQ(s.size(), 6u);
  const double expected[] = {3.141592653589793e-4, 3.1415926535897936e-4, 1.884955592153876e-4,
                             1.382300767579509e-4, 2.261946710584651e-4, 3.8484510006475046e-05};
  const SurfaceKind kinds[] = {SurfaceKind::Annulus,  SurfaceKind::Cylinder, SurfaceKind::Cylinder,
                               SurfaceKind::Annulus,  SurfaceKind::Cylinder, SurfaceKind::Annulus};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_DOUBLE_EQ(s[i].area, expected[i]) << "element " << i;
    EXPECT_EQ(s[i].kind, kinds[i]) << "element " << i;
    EXPECT_GT(s[i].gap, 0.0);
  }
}

TEST(Surfaces, TeethAdvanceByHeightPlusGap) {
  const BumpyGeometry g;
  const auto s = enumerate_surfaces(g);
  ASSERT_EQ(s.size(), 2u + 4u * static_cast<std::size_t>(g.n_teeth));
  for (int k = 0; k < g.n_teeth; ++k) {
    const auto& inner = s[2 + 4 * k];
    const double a = g.base_radius_m + k * (g.tooth_height_m + g.radial_gap_m);
    EXPECT_NEAR(inner.r_outer, a, 1e-15);
    EXPECT_NEAR(s[2 + 4 * k + 2].r_outer, a + g.tooth_height_m, 1e-15);
  }
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i].r_outer, s[i - 1].r_outer - 1e-15);
}

TEST(Surfaces, Deterministic) {
  const BumpyGeometry g;
  EXPECT_EQ(enumerate_surfaces(g), enumerate_surfaces(g));
}

TEST(Area, SmoothClosedForm) {
  BumpyGeometry g;
  g.n_teeth = 0;
  EXPECT_DOUBLE_EQ(active_area(g), 2 * pi * 0.01 * 0.005 + pi * 0.01 * 0.01);
}

TEST(Area, DoublingEngagementAddsOneWall) {
  BumpyGeometry g;
  g.n_teeth = 0;
  const double a1 = active_area(g);
  g.engagement_length_m *= 2;
  EXPECT_DOUBLE_EQ(active_area(g) - a1, 2 * pi * g.base_radius_m * 0.005);
}

TEST(Area, DefaultBumpyOverSmoothFrozen) {
  const BumpyGeometry g;
  EXPECT_DOUBLE_EQ(active_area(g), 0.0028030860451654935);
  EXPECT_DOUBLE_EQ(active_area(smooth_variant(g)), 6.283185307179586e-4);
  EXPECT_NEAR(active_area(g) / active_area(smooth_variant(g)), 4.46125, 1e-12);
}

TEST(Area, EqualsOrderedSumBitExactly) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const BumpyGeometry g = random_geometry(rng);
    double sum = 0.0;
    for (const auto& e : enumerate_surfaces(g)) sum += e.area;
    EXPECT_EQ(active_area(g), sum);
  }
}

TEST(Area, StrictlyIncreasingInEachDimension) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> grow(1.01, 2.0);
  for (int i = 0; i < 300; ++i) {
    BumpyGeometry g = random_geometry(rng);
    g.n_teeth = std::max(g.n_teeth, 1);
    const double base = active_area(g);

    BumpyGeometry more = g;
    ++more.n_teeth;
    EXPECT_GT(active_area(more), base);

    more = g;
    more.tooth_height_m *= grow(rng);
    EXPECT_GT(active_area(more), base);

    more = g;
    more.tooth_width_m *= grow(rng);
    EXPECT_GT(active_area(more), base);

    more = g;
    more.engagement_length_m *= grow(rng);
    EXPECT_GT(active_area(more), base);
  }
}

TEST(Validate, TeethMustFitHousing) {
  BumpyGeometry g;
  g.n_teeth = 6;  // 10 + 6 * 2.5 = 25 mm: just fits
  EXPECT_NO_THROW(validate(g));
  g.n_teeth = 7;
  EXPECT_THROW(validate(g), ConfigError);
}

TEST(Validate, Invariants) {
  BumpyGeometry g;
  g.base_radius_m = 0;
  EXPECT_THROW(validate(g), ConfigError);
  g = {};
  g.radial_gap_m = 0;
  EXPECT_THROW(validate(g), ConfigError);
  g = {};
  g.n_teeth = -1;
  EXPECT_THROW(validate(g), ConfigError);
  g = {};
  g.tooth_width_m = 0;
  EXPECT_THROW(validate(g), ConfigError);
  g.n_teeth = 0;
  EXPECT_NO_THROW(validate(g));
}

TEST(Json, MillimetresInFile) {
  const auto j = nlohmann::json::parse(
      R"({"r0_mm": 8, "n_teeth": 2, "tooth_h_mm": 1.5, "tooth_w_mm": 2, "g_r_mm": 0.3,
          "g_a_mm": 0.4, "l_eng_mm": 6, "housing_r_mm": 20})");
  const BumpyGeometry g = geometry_from_json(j);
  EXPECT_EQ(g.base_radius_m, 0.008);
  EXPECT_EQ(g.radial_gap_m, 0.0003);
  EXPECT_EQ(g.n_teeth, 2);
  EXPECT_EQ(geometry_from_json(to_json(g)), g);
}
