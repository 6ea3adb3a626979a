#pragma once

// Bingham-plastic shear torque over the wetted surfaces.
//
// Shear rate across a gap at radius r is r * |omega| / gap. A cylinder of
// radius r and area A carries tau_y * r * A of yield torque and
// eta * (r * |omega| / gap) * r * A of viscous torque; an annulus r1..r2
// integrates the same stresses over 2*pi*r dr. All components are
// magnitudes; the caller applies the sign that opposes motion.

#include <nlohmann/json_fwd.hpp>

#include "mrdial/geometry.hpp"
#include "mrdial/magnetics.hpp"

namespace mrdial::torque {

struct TorqueBreakdown {
  double yield = 0.0;    ///< t_yield, N*m
  double viscous = 0.0;  ///< t_viscous, N*m
  double total = 0.0;    ///< yield + viscous
  double breakaway = 0.0;///< t_static, N*m

  TorqueBreakdown& operator+=(const TorqueBreakdown& other) noexcept;
  friend bool operator==(const TorqueBreakdown&, const TorqueBreakdown&) = default;
};

/// Static-friction model. t_static = breakaway_factor * t_yield + coulomb.
struct FrictionParams {
  double breakaway_factor = 1.0;  ///< s_factor, >= 1
  double coulomb_nm = 0.0;        ///< speed-independent dry friction, N*m

  friend bool operator==(const FrictionParams&, const FrictionParams&) = default;
};

void validate(const FrictionParams& p);
FrictionParams friction_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FrictionParams& p);

/// Yield and viscous torque of one surface. `breakaway` is left at
/// t_yield; total_torque applies the friction model to the sum.
TorqueBreakdown element_torque(const geometry::SurfaceElement& elem, double omega,
                               double yield_pa, double viscosity);

/// d(t_yield)/d(tau_y) for one surface, m^3.
double yield_moment(const geometry::SurfaceElement& elem);

/// t_viscous / (eta * |omega|) for one surface, m^3.
double viscous_moment(const geometry::SurfaceElement& elem);

/// Sum over all enumerated surfaces of yield_moment, m^3.
double yield_moment(const geometry::BumpyGeometry& geom);

/// Viscous drag coefficient of the whole fluid film, N*m*s/rad.
double viscous_coefficient(const geometry::BumpyGeometry& geom, double viscosity);

/// Full stack: current -> H -> tau_y -> sum over surfaces.
TorqueBreakdown total_torque(const geometry::BumpyGeometry& geom, double omega, double current_a,
                             const magnetics::CoilSpec& coil, const magnetics::MaterialModel& mat,
                             const FrictionParams& friction = {});

/// Coil current at which total_torque(...).yield equals `yield_nm`.
/// Throws RangeError when unreachable within [0, i_max].
double current_for_yield_torque(const geometry::BumpyGeometry& geom, double yield_nm,
                                const magnetics::CoilSpec& coil,
                                const magnetics::MaterialModel& mat);

} // namespace mrdial::torque
