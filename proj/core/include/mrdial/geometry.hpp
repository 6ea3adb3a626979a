#pragma once

// Wetted-surface model of the shaft/housing interface.
//
// The bumpy profile is idealized as rectangular concentric teeth. Tooth k
// (1-based) occupies radii [a_k, a_k + tooth_h] with
// a_k = r0 + (k - 1) * (tooth_h + g_r) and protrudes tooth_w axially. Each
// tooth contributes four shear surfaces:
//   inner flank  cylinder at a_k,             length tooth_w, gap g_r
//   tip          annulus a_k .. a_k + tooth_h,                 gap g_a
//   outer flank  cylinder at a_k + tooth_h,   length tooth_w, gap g_r
//   root         annulus b_k .. b_k + g_r (floor up to the next tooth), gap g_a
// The housing carries the conjugate profile; corner effects are ignored.

#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mrdial::geometry {

struct BumpyGeometry {
  double base_radius_m = 10.0e-3;      ///< r0
  int n_teeth = 3;
  double tooth_height_m = 2.0e-3;      ///< radial
  double tooth_width_m = 3.0e-3;       ///< axial
  double radial_gap_m = 0.5e-3;        ///< g_r
  double axial_gap_m = 0.5e-3;         ///< g_a
  double engagement_length_m = 5.0e-3; ///< l_eng, smooth wall of the shaft
  double housing_radius_m = 25.0e-3;   ///< teeth must fit inside

  friend bool operator==(const BumpyGeometry&, const BumpyGeometry&) = default;
};

enum class SurfaceKind { Cylinder, Annulus };

/// A single shear surface. For a cylinder r_inner == r_outer == radius.
struct SurfaceElement {
  SurfaceKind kind = SurfaceKind::Cylinder;
  double r_inner = 0.0;
  double r_outer = 0.0;
  double length = 0.0;  ///< cylinders only
  double gap = 0.0;
  double area = 0.0;

  double radius() const noexcept { return r_outer; }

  friend bool operator==(const SurfaceElement&, const SurfaceElement&) = default;
};

SurfaceElement cylinder(double radius, double length, double gap);
SurfaceElement annulus(double r_inner, double r_outer, double gap);

/// Throws ConfigError when an invariant fails, including the teeth-fit
/// check r0 + n * (tooth_h + g_r) <= housing radius.
void validate(const BumpyGeometry& geom);

/// Ordered inner to outer: end face, base wall, then four surfaces per tooth.
std::vector<SurfaceElement> enumerate_surfaces(const BumpyGeometry& geom);

/// Sum of the enumerated areas, accumulated in enumeration order.
double active_area(const BumpyGeometry& geom);

/// Same geometry with the teeth removed.
BumpyGeometry smooth_variant(BumpyGeometry geom);

/// Geometry block, millimetres in the file.
BumpyGeometry geometry_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BumpyGeometry& geom);

} // namespace mrdial::geometry
