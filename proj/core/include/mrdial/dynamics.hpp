#pragma once

// Fixed-timestep rotor dynamics with stick-slip at the breakaway threshold.

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mrdial/geometry.hpp"
#include "mrdial/magnetics.hpp"
#include "mrdial/torque.hpp"

namespace mrdial::dynamics {

enum class Mode : std::uint8_t { Stuck, Slipping };

struct DialState {
  double theta = 0.0;    ///< rad, unbounded
  double omega = 0.0;    ///< rad/s
  Mode mode = Mode::Stuck;
  double current = 0.0;  ///< latest commanded coil current, A
  std::int64_t tick = 0;

  friend bool operator==(const DialState&, const DialState&) = default;
};

struct DialParams {
  double inertia = 5.0e-5;     ///< J, kg*m^2
  double dt = 1.0e-3;          ///< s
  double bearing_damping = 1.0e-4;  ///< c_bearing, N*m*s/rad
  double omega_max = 200.0;    ///< rad/s safety clamp

  friend bool operator==(const DialParams&, const DialParams&) = default;
};

/// Everything step() needs besides the state and the user torque.
struct Plant {
  DialParams params;
  geometry::BumpyGeometry geometry;
  magnetics::CoilSpec coil;
  magnetics::MaterialModel material;
  torque::FrictionParams friction;
};

/// Precomputed per-plant quantities. The surface sums do not depend on the
/// state, so a long-running loop builds this once.
class Rotor {
public:
  explicit Rotor(Plant plant);

  const Plant& plant() const noexcept { return plant_; }
  /// Viscous film drag, N*m*s/rad (excludes the bearing).
  double film_damping() const noexcept { return film_damping_; }

  /// Fluid torque breakdown at the given speed and coil current.
  torque::TorqueBreakdown breakdown(double omega, double current) const;

private:
  Plant plant_;
  std::vector<geometry::SurfaceElement> surfaces_;
  double film_damping_ = 0.0;
};

/// Diagnostic view of one integration step.
struct StepReport {
  DialState state;
  torque::TorqueBreakdown fluid;  ///< breakdown at the pre-step state
  double user_torque = 0.0;
  /// Torque the fluid film applied over the step (negative while opposing
  /// positive rotation). Zero when the rotor stayed stuck.
  double fluid_torque = 0.0;
};

/// Advance one tick. Stuck rotors stay stuck while |t_user| <= t_static;
/// slipping rotors integrate with semi-implicit Euler and snap to stuck when
/// omega crosses zero under sub-breakaway load. Throws InputError when
/// t_user is not finite.
StepReport step_detailed(const DialState& state, double user_torque, const Rotor& rotor);
DialState step(const DialState& state, double user_torque, const Rotor& rotor);

/// Convenience overload that rebuilds the rotor every call.
DialState step(const DialState& state, double user_torque, const DialParams& params,
               const geometry::BumpyGeometry& geom, const magnetics::CoilSpec& coil,
               const magnetics::MaterialModel& mat, const torque::FrictionParams& friction = {});

/// Virtual torsional spring standing in for the hand.
struct InputParams {
  double stiffness = 2.0;      ///< k_input, N*m/rad
  double damping = 0.0;        ///< N*m*s/rad on the realized rate
  double max_torque = 3.0;     ///< t_user_max, N*m

  friend bool operator==(const InputParams&, const InputParams&) = default;
};

/// t_user = k * (delta_theta - realized) - c * realized / window, clamped to
/// +-max_torque. `delta_theta` is the rotation the user asked for and
/// `realized` what the rotor actually turned over `window` seconds.
/// Throws InputError for window <= 0.
double apply_user_input(const InputParams& input, double delta_theta, double realized,
                        double window);

void validate(const DialParams& p);
void validate(const InputParams& p);
DialParams dial_params_from_json(const nlohmann::json& j);
InputParams input_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DialParams& p);
nlohmann::json to_json(const InputParams& p);

const char* to_string(Mode mode) noexcept;

} // namespace mrdial::dynamics
