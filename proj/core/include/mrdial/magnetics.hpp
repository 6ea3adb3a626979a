#pragma once

// Coil current -> field intensity in the fluid gap -> Bingham yield stress.
//
// Units: currents in A, lengths in m, viscosity in Pa*s, yield stress in Pa.
// Field intensity is carried in kA/m because that is how MR fluid datasheets
// tabulate their yield curves.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mrdial::magnetics {

struct CurvePoint {
  double field_ka_m = 0.0;   ///< H, kA/m
  double yield_pa = 0.0;     ///< tau_y, Pa

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Off-state viscosity plus the field-dependent yield stress curve.
struct MaterialModel {
  std::string name;
  double viscosity_pa_s = 0.0;
  std::vector<CurvePoint> curve;

  friend bool operator==(const MaterialModel&, const MaterialModel&) = default;
};

/// Lumped magnetic circuit of the solenoid driving the fluid gap.
struct CoilSpec {
  int turns = 300;
  double max_current_a = 1.0;
  double gap_length_m = 1.0e-3;
  double coupling = 0.7;  ///< kappa: core reluctance and leakage, in (0, 1]

  friend bool operator==(const CoilSpec&, const CoilSpec&) = default;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const MaterialModel& mat);
void validate(const CoilSpec& coil);

/// H = kappa * N * I / gap, in kA/m. Throws RangeError if current is
/// outside [0, i_max].
double field_from_current(const CoilSpec& coil, double current_a);

/// Inverse of field_from_current (no range check on the result).
double current_for_field(const CoilSpec& coil, double field_ka_m);

/// Piecewise-linear yield stress (Pa) with saturation past the last knot.
/// Throws RangeError for negative or non-finite H.
double yield_stress(const MaterialModel& mat, double field_ka_m);

/// Smallest H with yield_stress(H) == tau_pa on the rising part of the
/// curve. Throws RangeError when tau_pa exceeds the saturated yield stress.
double field_for_yield_stress(const MaterialModel& mat, double tau_pa);

/// Material file / config block:
///   { "name": str, "eta_pa_s": num, "curve": [[H_kA_per_m, tau_kPa], ...] }
/// Errors carry a JSON pointer relative to `j`.
MaterialModel material_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MaterialModel& mat);

CoilSpec coil_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CoilSpec& coil);

/// Parses a standalone material file; errors are anchored to the line of
/// the offending value in `text`.
MaterialModel parse_material(std::string_view text, const std::string& source = "<material>");
MaterialModel load_material(const std::string& path);

/// MRF-140CG yield curve digitized from the manufacturer's datasheet. Same
/// numbers as data/mrf140cg.json.
MaterialModel mrf140cg();

} // namespace mrdial::magnetics
