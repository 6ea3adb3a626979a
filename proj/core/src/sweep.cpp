#include "mrdial/sweep.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "mrdial/errors.hpp"
#include "mrdial/torque.hpp"

namespace mrdial::sweep {

std::optional<Variable> variable_from_string(std::string_view name) noexcept {
  if (name == "current") return Variable::Current;
  if (name == "omega") return Variable::Omega;
  if (name == "n_teeth") return Variable::NTeeth;
  return std::nullopt;
}

std::string_view to_string(Variable v) noexcept {
  switch (v) {
    case Variable::Current: return "current";
    case Variable::Omega: return "omega";
    case Variable::NTeeth: return "n_teeth";
  }
  return "?";
}

namespace {

double grid(const SweepSpec& s, int i) {
  return s.start + i * (s.stop - s.start) / (s.steps - 1);
}

} // namespace

void validate(const SweepSpec& s, const Config& config) {
  if (s.steps < 2) {
    throw ConfigError("SweepSpec.steps >= 2", "steps = " + std::to_string(s.steps), "/steps");
  }
  if (!std::isfinite(s.start) || !std::isfinite(s.stop) || !(s.start < s.stop)) {
    throw ConfigError("SweepSpec.start < stop",
                      format_number(s.start) + " .. " + format_number(s.stop), "/range");
  }
  const double i_max = config.coil.max_current_a;
  switch (s.variable) {
    case Variable::Current:
      if (s.start < 0.0 || s.stop > i_max) {
        throw ConfigError("SweepSpec current range within [0, i_max]",
                          format_number(s.start) + " .. " + format_number(s.stop) + " A", "/range");
      }
      break;
    case Variable::NTeeth:
      for (int i = 0; i < s.steps; ++i) {
        const double x = grid(s, i);
        if (std::abs(x - std::round(x)) > 1e-9 || x < 0.0) {
          throw ConfigError("SweepSpec n_teeth grid is non-negative integers",
                            "grid point " + format_number(x), "/range");
        }
      }
      break;
    case Variable::Omega:
      break;
  }
  if (s.variable != Variable::Current && !(s.fixed_current >= 0.0 && s.fixed_current <= i_max)) {
    throw ConfigError("SweepSpec fixed current within [0, i_max]",
                      format_number(s.fixed_current) + " A", "/current");
  }
  if (s.variable != Variable::Omega && !std::isfinite(s.fixed_omega)) {
    throw ConfigError("SweepSpec fixed omega is finite", format_number(s.fixed_omega), "/omega");
  }
}

std::vector<SweepRow> run_sweep(const Config& config, const SweepSpec& spec) {
  validate(spec, config);
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(spec.steps));
  for (int i = 0; i < spec.steps; ++i) {
    const double x = grid(spec, i);
    geometry::BumpyGeometry geom = config.geometry;
    double current = spec.fixed_current;
    double omega = spec.fixed_omega;
    switch (spec.variable) {
      case Variable::Current: current = x; break;
      case Variable::Omega: omega = x; break;
      case Variable::NTeeth: geom.n_teeth = static_cast<int>(std::lround(x)); break;
    }
    const auto t = torque::total_torque(geom, omega, current, config.coil, config.material,
                                        config.friction);
    rows.push_back({spec.variable == Variable::NTeeth ? std::round(x) : x, t.yield, t.viscous,
                    t.total});
  }
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "x,t_yield,t_viscous,t_total\n";
  for (const auto& r : rows) {
    out << format_number(r.x) << ',' << format_number(r.t_yield) << ','
        << format_number(r.t_viscous) << ',' << format_number(r.t_total) << '\n';
  }
}

} // namespace mrdial::sweep
