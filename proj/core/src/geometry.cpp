#include "mrdial/geometry.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "mrdial/errors.hpp"

namespace mrdial::geometry {

using std::numbers::pi;

SurfaceElement cylinder(double radius, double length, double gap) {
  return {SurfaceKind::Cylinder, radius, radius, length, gap, 2.0 * pi * radius * length};
}

SurfaceElement annulus(double r_inner, double r_outer, double gap) {
  return {SurfaceKind::Annulus, r_inner, r_outer, 0.0, gap,
          pi * (r_outer * r_outer - r_inner * r_inner)};
}

namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

} // namespace

void validate(const BumpyGeometry& g) {
  if (!positive(g.base_radius_m)) {
    throw ConfigError("BumpyGeometry.r0 > 0", "r0 = " + std::to_string(g.base_radius_m), "/r0_mm");
  }
  if (g.n_teeth < 0) {
    throw ConfigError("BumpyGeometry.n_teeth >= 0", "n_teeth = " + std::to_string(g.n_teeth),
                      "/n_teeth");
  }
  if (g.n_teeth > 0 && !positive(g.tooth_height_m)) {
    throw ConfigError("BumpyGeometry.tooth_h > 0", "tooth_h = " + std::to_string(g.tooth_height_m),
                      "/tooth_h_mm");
  }
  if (g.n_teeth > 0 && !positive(g.tooth_width_m)) {
    throw ConfigError("BumpyGeometry.tooth_w > 0", "tooth_w = " + std::to_string(g.tooth_width_m),
                      "/tooth_w_mm");
  }
  if (!positive(g.radial_gap_m)) {
    throw ConfigError("BumpyGeometry.g_r > 0", "g_r = " + std::to_string(g.radial_gap_m), "/g_r_mm");
  }
  if (!positive(g.axial_gap_m)) {
    throw ConfigError("BumpyGeometry.g_a > 0", "g_a = " + std::to_string(g.axial_gap_m), "/g_a_mm");
  }
  if (!positive(g.engagement_length_m)) {
    throw ConfigError("BumpyGeometry.l_eng > 0", "l_eng = " + std::to_string(g.engagement_length_m),
                      "/l_eng_mm");
  }
  const double outer =
      g.base_radius_m + g.n_teeth * ((g.n_teeth > 0 ? g.tooth_height_m : 0.0) + g.radial_gap_m);
  if (!(outer <= g.housing_radius_m)) {
    throw ConfigError("BumpyGeometry teeth fit: r0 + n_teeth*(tooth_h + g_r) <= housing radius",
                      std::to_string(outer * 1e3) + " mm > " +
                          std::to_string(g.housing_radius_m * 1e3) + " mm",
                      "/n_teeth");
  }
}

std::vector<SurfaceElement> enumerate_surfaces(const BumpyGeometry& g) {
  validate(g);
  std::vector<SurfaceElement> out;
  out.reserve(2 + 4 * static_cast<std::size_t>(g.n_teeth));
  out.push_back(annulus(0.0, g.base_radius_m, g.axial_gap_m));
  out.push_back(cylinder(g.base_radius_m, g.engagement_length_m, g.radial_gap_m));
  for (int k = 0; k < g.n_teeth; ++k) {
    const double a = g.base_radius_m + k * (g.tooth_height_m + g.radial_gap_m);
    const double b = a + g.tooth_height_m;
    out.push_back(cylinder(a, g.tooth_width_m, g.radial_gap_m));
    out.push_back(annulus(a, b, g.axial_gap_m));
    out.push_back(cylinder(b, g.tooth_width_m, g.radial_gap_m));
    out.push_back(annulus(b, b + g.radial_gap_m, g.axial_gap_m));
  }
  return out;
}

double active_area(const BumpyGeometry& geom) {
  double total = 0.0;
  for (const auto& e : enumerate_surfaces(geom)) total += e.area;
  return total;
}

BumpyGeometry smooth_variant(BumpyGeometry geom) {
  geom.n_teeth = 0;
  return geom;
}

BumpyGeometry geometry_from_json(const nlohmann::json& j) {
  const std::string owner = "BumpyGeometry";
  BumpyGeometry g;
  g.base_radius_m = detail::number(j, "r0_mm", "", owner) / 1000.0;
  const long long n = detail::integer(j, "n_teeth", "", owner);
  if (n < 0 || n > 10'000) {
    throw ConfigError("BumpyGeometry.n_teeth >= 0", "n_teeth = " + std::to_string(n), "/n_teeth");
  }
  g.n_teeth = static_cast<int>(n);
  g.tooth_height_m = detail::number(j, "tooth_h_mm", "", owner) / 1000.0;
  g.tooth_width_m = detail::number(j, "tooth_w_mm", "", owner) / 1000.0;
  g.radial_gap_m = detail::number(j, "g_r_mm", "", owner) / 1000.0;
  g.axial_gap_m = detail::number(j, "g_a_mm", "", owner) / 1000.0;
  g.engagement_length_m = detail::number(j, "l_eng_mm", "", owner) / 1000.0;
  g.housing_radius_m = detail::number(j, "housing_r_mm", "", owner) / 1000.0;
  validate(g);
  return g;
}

nlohmann::json to_json(const BumpyGeometry& g) {
  return {{"r0_mm", g.base_radius_m * 1e3},       {"n_teeth", g.n_teeth},
          {"tooth_h_mm", g.tooth_height_m * 1e3}, {"tooth_w_mm", g.tooth_width_m * 1e3},
          {"g_r_mm", g.radial_gap_m * 1e3},       {"g_a_mm", g.axial_gap_m * 1e3},
          {"l_eng_mm", g.engagement_length_m * 1e3}, {"housing_r_mm", g.housing_radius_m * 1e3}};
}

} // namespace mrdial::geometry
