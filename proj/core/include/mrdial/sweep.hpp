#pragma once

// Torque parameter sweeps over current, speed or tooth count.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrdial/config.hpp"

namespace mrdial::sweep {

enum class Variable { Current, Omega, NTeeth };

std::optional<Variable> variable_from_string(std::string_view name) noexcept;
std::string_view to_string(Variable v) noexcept;

struct SweepSpec {
  Variable variable = Variable::Current;
  double start = 0.0;
  double stop = 1.0;
  int steps = 11;
  double fixed_current = 0.5;  ///< A, used unless sweeping current
  double fixed_omega = 0.0;    ///< rad/s, used unless sweeping omega
};

/// steps >= 2, start < stop, n_teeth grids land on integers, currents stay
/// within [0, i_max]. Throws ConfigError.
void validate(const SweepSpec& spec, const Config& config);

struct SweepRow {
  double x = 0.0;
  double t_yield = 0.0;
  double t_viscous = 0.0;
  double t_total = 0.0;
};

/// Grid point i is start + i * (stop - start) / (steps - 1).
std::vector<SweepRow> run_sweep(const Config& config, const SweepSpec& spec);

/// Header `x,t_yield,t_viscous,t_total`; numbers in shortest round-trip form.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Shortest decimal that parses back to exactly `v`.
std::string format_number(double v);

} // namespace mrdial::sweep
