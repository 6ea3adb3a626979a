#include "mrdial/torque.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "mrdial/errors.hpp"

namespace mrdial::torque {

using geometry::SurfaceElement;
using geometry::SurfaceKind;
using std::numbers::pi;

TorqueBreakdown& TorqueBreakdown::operator+=(const TorqueBreakdown& other) noexcept {
  yield += other.yield;
  viscous += other.viscous;
  total += other.total;
  breakaway += other.breakaway;
  return *this;
}

void validate(const FrictionParams& p) {
  if (!(p.breakaway_factor >= 1.0) || !std::isfinite(p.breakaway_factor)) {
    throw ConfigError("FrictionParams.s_factor >= 1", "s_factor = " + std::to_string(p.breakaway_factor),
                      "/s_factor");
  }
  if (!(p.coulomb_nm >= 0.0) || !std::isfinite(p.coulomb_nm)) {
    throw ConfigError("FrictionParams.coulomb_nm >= 0", "coulomb_nm = " + std::to_string(p.coulomb_nm),
                      "/coulomb_nm");
  }
}

FrictionParams friction_from_json(const nlohmann::json& j) {
  const std::string owner = "FrictionParams";
  FrictionParams p;
  p.breakaway_factor = detail::number_or(j, "s_factor", p.breakaway_factor, "", owner);
  p.coulomb_nm = detail::number_or(j, "coulomb_nm", p.coulomb_nm, "", owner);
  validate(p);
  return p;
}

nlohmann::json to_json(const FrictionParams& p) {
  return {{"s_factor", p.breakaway_factor}, {"coulomb_nm", p.coulomb_nm}};
}

double yield_moment(const SurfaceElement& e) {
  if (e.kind == SurfaceKind::Cylinder) return e.r_outer * e.area;
  const double r1 = e.r_inner;
  const double r2 = e.r_outer;
  return (2.0 * pi / 3.0) * (r2 * r2 * r2 - r1 * r1 * r1);
}

double viscous_moment(const SurfaceElement& e) {
  if (e.kind == SurfaceKind::Cylinder) return e.r_outer * e.r_outer * e.area / e.gap;
  const double r1 = e.r_inner;
  const double r2 = e.r_outer;
  return (pi / 2.0) * (r2 * r2 * r2 * r2 - r1 * r1 * r1 * r1) / e.gap;
}

TorqueBreakdown element_torque(const SurfaceElement& e, double omega, double yield_pa,
                               double viscosity) {
  const double speed = std::abs(omega);
  TorqueBreakdown out;
  if (e.kind == SurfaceKind::Cylinder) {
    const double r = e.r_outer;
    out.yield = yield_pa * r * e.area;
    out.viscous = viscosity * (r * speed / e.gap) * r * e.area;
  } else {
    const double r1 = e.r_inner;
    const double r2 = e.r_outer;
    out.yield = (2.0 * pi / 3.0) * yield_pa * (r2 * r2 * r2 - r1 * r1 * r1);
    out.viscous = (pi / 2.0) * (viscosity * speed / e.gap) * (r2 * r2 * r2 * r2 - r1 * r1 * r1 * r1);
  }
  out.total = out.yield + out.viscous;
  out.breakaway = out.yield;
  return out;
}

double yield_moment(const geometry::BumpyGeometry& geom) {
  double sum = 0.0;
  for (const auto& e : geometry::enumerate_surfaces(geom)) sum += yield_moment(e);
  return sum;
}

double viscous_coefficient(const geometry::BumpyGeometry& geom, double viscosity) {
  double sum = 0.0;
  for (const auto& e : geometry::enumerate_surfaces(geom)) sum += viscous_moment(e);
  return viscosity * sum;
}

TorqueBreakdown total_torque(const geometry::BumpyGeometry& geom, double omega, double current_a,
                             const magnetics::CoilSpec& coil, const magnetics::MaterialModel& mat,
                             const FrictionParams& friction) {
  const double field = magnetics::field_from_current(coil, current_a);
  const double tau = magnetics::yield_stress(mat, field);
  TorqueBreakdown sum;
  for (const auto& e : geometry::enumerate_surfaces(geom)) {
    sum += element_torque(e, omega, tau, mat.viscosity_pa_s);
  }
  sum.total = sum.yield + sum.viscous;
  sum.breakaway = friction.breakaway_factor * sum.yield + friction.coulomb_nm;
  return sum;
}

double current_for_yield_torque(const geometry::BumpyGeometry& geom, double yield_nm,
                                const magnetics::CoilSpec& coil,
                                const magnetics::MaterialModel& mat) {
  const double tau = yield_nm / yield_moment(geom);
  const double field = magnetics::field_for_yield_stress(mat, tau);
  const double current = magnetics::current_for_field(coil, field);
  if (current > coil.max_current_a) {
    throw RangeError("yield torque " + std::to_string(yield_nm) + " N*m needs " +
                     std::to_string(current) + " A > i_max");
  }
  return current;
}

} // namespace mrdial::torque
