#include "mrdial/magnetics.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "mrdial/errors.hpp"

namespace mrdial::magnetics {

using detail::json;

void validate(const MaterialModel& mat) {
  if (!(mat.viscosity_pa_s > 0.0) || !std::isfinite(mat.viscosity_pa_s)) {
    throw ConfigError("MaterialModel.eta > 0", "eta = " + std::to_string(mat.viscosity_pa_s),
                      "/eta_pa_s");
  }
  if (mat.curve.size() < 2) {
    throw ConfigError("MaterialModel.tau_curve has >= 2 points",
                      std::to_string(mat.curve.size()) + " point(s)", "/curve");
  }
  if (mat.curve.front().field_ka_m != 0.0 || mat.curve.front().yield_pa != 0.0) {
    throw ConfigError("MaterialModel.tau_curve starts at (0, 0)", "first point is not the origin",
                      "/curve/0");
  }
  for (std::size_t i = 0; i < mat.curve.size(); ++i) {
    const auto& p = mat.curve[i];
    const std::string ptr = "/curve/" + std::to_string(i);
    if (!std::isfinite(p.field_ka_m) || !std::isfinite(p.yield_pa)) {
      throw ConfigError("MaterialModel.tau_curve values are finite", "non-finite value", ptr);
    }
    if (p.yield_pa < 0.0) {
      throw ConfigError("MaterialModel.tau_curve tau_y >= 0", "negative yield stress", ptr);
    }
    if (i == 0) continue;
    const auto& prev = mat.curve[i - 1];
    if (!(p.field_ka_m > prev.field_ka_m)) {
      throw ConfigError("MaterialModel.tau_curve H strictly increasing",
                        "H[" + std::to_string(i) + "] <= H[" + std::to_string(i - 1) + "]", ptr);
    }
    if (p.yield_pa < prev.yield_pa) {
      throw ConfigError("MaterialModel.tau_curve tau_y non-decreasing",
                        "tau[" + std::to_string(i) + "] < tau[" + std::to_string(i - 1) + "]", ptr);
    }
  }
}

void validate(const CoilSpec& coil) {
  if (coil.turns < 1) {
    throw ConfigError("CoilSpec.turns >= 1", "turns = " + std::to_string(coil.turns), "/turns");
  }
  if (!(coil.max_current_a > 0.0) || !std::isfinite(coil.max_current_a)) {
    throw ConfigError("CoilSpec.i_max > 0", "i_max = " + std::to_string(coil.max_current_a),
                      "/i_max");
  }
  if (!(coil.gap_length_m > 0.0) || !std::isfinite(coil.gap_length_m)) {
    throw ConfigError("CoilSpec.gap_len > 0", "gap_len = " + std::to_string(coil.gap_length_m),
                      "/gap_len_mm");
  }
  if (!(coil.coupling > 0.0 && coil.coupling <= 1.0)) {
    throw ConfigError("CoilSpec.kappa in (0, 1]", "kappa = " + std::to_string(coil.coupling),
                      "/kappa");
  }
}

double field_from_current(const CoilSpec& coil, double current_a) {
  if (!(current_a >= 0.0 && current_a <= coil.max_current_a)) {
    throw RangeError("coil current " + std::to_string(current_a) + " A outside [0, " +
                     std::to_string(coil.max_current_a) + "] A");
  }
  // A/m -> kA/m
  return coil.coupling * coil.turns * current_a / coil.gap_length_m / 1000.0;
}

double current_for_field(const CoilSpec& coil, double field_ka_m) {
  return field_ka_m * 1000.0 * coil.gap_length_m / (coil.coupling * coil.turns);
}

double yield_stress(const MaterialModel& mat, double field_ka_m) {
  if (!(field_ka_m >= 0.0) || !std::isfinite(field_ka_m)) {
    throw RangeError("field intensity " + std::to_string(field_ka_m) + " kA/m must be >= 0");
  }
  const auto& curve = mat.curve;
  if (field_ka_m >= curve.back().field_ka_m) return curve.back().yield_pa;

  // First knot strictly above H; H lies in [lo, hi).
  const auto hi = std::upper_bound(curve.begin(), curve.end(), field_ka_m,
                                   [](double h, const CurvePoint& p) { return h < p.field_ka_m; });
  const auto lo = hi - 1;
  if (field_ka_m == lo->field_ka_m) return lo->yield_pa;
  const double t = (field_ka_m - lo->field_ka_m) / (hi->field_ka_m - lo->field_ka_m);
  return lo->yield_pa + t * (hi->yield_pa - lo->yield_pa);
}

double field_for_yield_stress(const MaterialModel& mat, double tau_pa) {
  const auto& curve = mat.curve;
  if (!(tau_pa >= 0.0) || tau_pa > curve.back().yield_pa) {
    throw RangeError("yield stress " + std::to_string(tau_pa) + " Pa is not reachable (saturates at " +
                     std::to_string(curve.back().yield_pa) + " Pa)");
  }
  if (tau_pa == 0.0) return 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const auto& lo = curve[i - 1];
    const auto& hi = curve[i];
    if (tau_pa <= hi.yield_pa && hi.yield_pa > lo.yield_pa) {
      const double t = (tau_pa - lo.yield_pa) / (hi.yield_pa - lo.yield_pa);
      return lo.field_ka_m + t * (hi.field_ka_m - lo.field_ka_m);
    }
  }
  return curve.back().field_ka_m;
}

MaterialModel material_from_json(const json& j) {
  const std::string owner = "MaterialModel";
  MaterialModel mat;
  mat.name = detail::string(j, "name", "", owner);
  mat.viscosity_pa_s = detail::number(j, "eta_pa_s", "", owner);
  const json& curve = detail::require(j, "curve", "", owner);
  if (!curve.is_array()) {
    throw ConfigError("MaterialModel.tau_curve is an array", "got " + curve.dump(), "/curve");
  }
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const json& p = curve[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ConfigError("MaterialModel.tau_curve entries are [H_kA_per_m, tau_kPa]",
                        "got " + p.dump(), "/curve/" + std::to_string(i));
    }
    mat.curve.push_back({p[0].get<double>(), p[1].get<double>() * 1000.0});
  }
  validate(mat);
  return mat;
}

json to_json(const MaterialModel& mat) {
  json curve = json::array();
  for (const auto& p : mat.curve) curve.push_back({p.field_ka_m, p.yield_pa / 1000.0});
  return {{"name", mat.name}, {"eta_pa_s", mat.viscosity_pa_s}, {"curve", curve}};
}

CoilSpec coil_from_json(const json& j) {
  const std::string owner = "CoilSpec";
  CoilSpec coil;
  const long long turns = detail::integer(j, "turns", "", owner);
  if (turns < 1 || turns > 1'000'000) {
    throw ConfigError("CoilSpec.turns >= 1", "turns = " + std::to_string(turns), "/turns");
  }
  coil.turns = static_cast<int>(turns);
  coil.max_current_a = detail::number(j, "i_max", "", owner);
  coil.gap_length_m = detail::number(j, "gap_len_mm", "", owner) / 1000.0;
  coil.coupling = detail::number(j, "kappa", "", owner);
  validate(coil);
  return coil;
}

json to_json(const CoilSpec& coil) {
  return {{"turns", coil.turns},
          {"i_max", coil.max_current_a},
          {"gap_len_mm", coil.gap_length_m * 1000.0},
          {"kappa", coil.coupling}};
}

MaterialModel parse_material(std::string_view text, const std::string& source) {
  const json j = detail::parse_text(text, source);
  try {
    return material_from_json(j);
  } catch (const ConfigError& e) {
    detail::rethrow_anchored(e, text, source);
  }
}

MaterialModel load_material(const std::string& path) {
  return parse_material(detail::read_file(path), path);
}

MaterialModel mrf140cg() {
  MaterialModel mat;
  mat.name = "MRF-140CG";
  mat.viscosity_pa_s = 0.280;
  // (kA/m, kPa)
  const std::pair<double, double> knots[] = {
      {0, 0},     {25, 5.5},  {50, 12.5}, {75, 19.5},  {100, 26.0}, {125, 31.5},
      {150, 36.5}, {175, 40.5}, {200, 44.0}, {250, 49.5}, {300, 53.5}, {400, 58.5},
  };
  for (const auto& [h, tau_kpa] : knots) mat.curve.push_back({h, tau_kpa * 1000.0});
  return mat;
}

} // namespace mrdial::magnetics
