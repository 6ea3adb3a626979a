#include "mrdial/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "mrdial/errors.hpp"

namespace mrdial::dynamics {

Rotor::Rotor(Plant plant) : plant_(std::move(plant)) {
  validate(plant_.params);
  magnetics::validate(plant_.coil);
  magnetics::validate(plant_.material);
  torque::validate(plant_.friction);
  surfaces_ = geometry::enumerate_surfaces(plant_.geometry);
  film_damping_ = torque::viscous_coefficient(plant_.geometry, plant_.material.viscosity_pa_s);
}

torque::TorqueBreakdown Rotor::breakdown(double omega, double current) const {
  const double field = magnetics::field_from_current(plant_.coil, current);
  const double tau = magnetics::yield_stress(plant_.material, field);
  torque::TorqueBreakdown sum;
  for (const auto& e : surfaces_) {
    sum += torque::element_torque(e, omega, tau, plant_.material.viscosity_pa_s);
  }
  sum.total = sum.yield + sum.viscous;
  sum.breakaway = plant_.friction.breakaway_factor * sum.yield + plant_.friction.coulomb_nm;
  return sum;
}

StepReport step_detailed(const DialState& state, double user_torque, const Rotor& rotor) {
  if (!std::isfinite(user_torque)) {
    throw InputError("user torque must be finite");
  }
  const DialParams& p = rotor.plant().params;
  StepReport report;
  report.user_torque = user_torque;
  report.fluid = rotor.breakdown(state.omega, state.current);

  DialState next = state;
  next.tick = state.tick + 1;

  const double t_static = report.fluid.breakaway;
  const bool held = std::abs(user_torque) <= t_static;

  double omega = state.mode == Mode::Stuck ? 0.0 : state.omega;
  if (state.mode == Mode::Stuck && held) {
    next.omega = 0.0;
    report.state = next;
    return report;
  }

  // Direction of motion for the dry-friction term.
  double dir = 0.0;
  if (omega > 0.0) dir = 1.0;
  else if (omega < 0.0) dir = -1.0;
  else if (!held) dir = user_torque > 0.0 ? 1.0 : -1.0;

  if (dir == 0.0) {
    // Slipping at exactly zero speed without enough load to keep moving.
    next.mode = Mode::Stuck;
    next.omega = 0.0;
    report.state = next;
    return report;
  }

  const double dry = report.fluid.yield + rotor.plant().friction.coulomb_nm;
  const double damping = rotor.film_damping() + p.bearing_damping;
  double omega_next = omega + p.dt / p.inertia * (user_torque - dir * dry - damping * omega);
  report.fluid_torque = -dir * report.fluid.yield - rotor.film_damping() * omega;

  const bool crossed = dir > 0.0 ? omega_next <= 0.0 : omega_next >= 0.0;
  if (crossed && held) {
    next.mode = Mode::Stuck;
    next.omega = 0.0;
    report.state = next;
    return report;
  }

  omega_next = std::clamp(omega_next, -p.omega_max, p.omega_max);
  next.mode = Mode::Slipping;
  next.omega = omega_next;
  next.theta = state.theta + p.dt * omega_next;
  report.state = next;
  return report;
}

DialState step(const DialState& state, double user_torque, const Rotor& rotor) {
  return step_detailed(state, user_torque, rotor).state;
}

DialState step(const DialState& state, double user_torque, const DialParams& params,
               const geometry::BumpyGeometry& geom, const magnetics::CoilSpec& coil,
               const magnetics::MaterialModel& mat, const torque::FrictionParams& friction) {
  const Rotor rotor(Plant{params, geom, coil, mat, friction});
  return step(state, user_torque, rotor);
}

double apply_user_input(const InputParams& input, double delta_theta, double realized,
                        double window) {
  if (!(window > 0.0)) throw InputError("input window must be positive");
  if (!std::isfinite(delta_theta) || !std::isfinite(realized)) {
    throw InputError("dial rotation must be finite");
  }
  const double t = input.stiffness * (delta_theta - realized) - input.damping * realized / window;
  return std::clamp(t, -input.max_torque, input.max_torque);
}

namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }
bool non_negative(double v) { return v >= 0.0 && std::isfinite(v); }

} // namespace

void validate(const DialParams& p) {
  if (!positive(p.inertia)) {
    throw ConfigError("DialParams.J > 0", "J = " + std::to_string(p.inertia), "/inertia");
  }
  if (!positive(p.dt)) throw ConfigError("DialParams.dt > 0", "dt = " + std::to_string(p.dt), "/dt");
  if (!non_negative(p.bearing_damping)) {
    throw ConfigError("DialParams.c_bearing >= 0", "c_bearing = " + std::to_string(p.bearing_damping),
                      "/c_bearing");
  }
  if (!positive(p.omega_max)) {
    throw ConfigError("DialParams.omega_max > 0", "omega_max = " + std::to_string(p.omega_max),
                      "/omega_max");
  }
}

void validate(const InputParams& p) {
  if (!positive(p.stiffness)) {
    throw ConfigError("InputParams.k_input > 0", "k_input = " + std::to_string(p.stiffness),
                      "/k_input");
  }
  if (!non_negative(p.damping)) {
    throw ConfigError("InputParams.damping >= 0", "damping = " + std::to_string(p.damping),
                      "/damping");
  }
  if (!positive(p.max_torque)) {
    throw ConfigError("InputParams.t_user_max > 0", "t_user_max = " + std::to_string(p.max_torque),
                      "/t_user_max");
  }
}

DialParams dial_params_from_json(const nlohmann::json& j) {
  const std::string owner = "DialParams";
  DialParams p;
  p.inertia = detail::number_or(j, "inertia", p.inertia, "", owner);
  p.dt = detail::number_or(j, "dt", p.dt, "", owner);
  p.bearing_damping = detail::number_or(j, "c_bearing", p.bearing_damping, "", owner);
  p.omega_max = detail::number_or(j, "omega_max", p.omega_max, "", owner);
  validate(p);
  return p;
}

InputParams input_params_from_json(const nlohmann::json& j) {
  const std::string owner = "InputParams";
  InputParams p;
  p.stiffness = detail::number_or(j, "k_input", p.stiffness, "", owner);
  p.damping = detail::number_or(j, "damping", p.damping, "", owner);
  p.max_torque = detail::number_or(j, "t_user_max", p.max_torque, "", owner);
  validate(p);
  return p;
}

nlohmann::json to_json(const DialParams& p) {
  return {{"inertia", p.inertia}, {"dt", p.dt}, {"c_bearing", p.bearing_damping},
          {"omega_max", p.omega_max}};
}

nlohmann::json to_json(const InputParams& p) {
  return {{"k_input", p.stiffness}, {"damping", p.damping}, {"t_user_max", p.max_torque}};
}

const char* to_string(Mode mode) noexcept {
  return mode == Mode::Stuck ? "stuck" : "slipping";
}

} // namespace mrdial::dynamics
