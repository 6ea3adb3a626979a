#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mrdial {

/// A physical quantity outside its admissible range (e.g. a coil current
/// above i_max). Usually means a bad control signal upstream.
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Non-finite or otherwise unusable runtime input.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration that violates a type invariant. `invariant` names the
/// violated rule (e.g. "CoilSpec.i_max > 0"); `pointer` is the JSON pointer
/// of the offending value when the error came from a file, and `line` its
/// 1-based line once resolved against the source text.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string invariant, std::string detail, std::string pointer = {},
              std::optional<std::size_t> line = std::nullopt, std::string source = {});

  const std::string& invariant() const noexcept { return invariant_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::string& pointer() const noexcept { return pointer_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

  /// Copy of this error anchored to a line of a named source.
  ConfigError anchored(std::string source, std::optional<std::size_t> line) const;
  /// Copy with `prefix` prepended to the JSON pointer.
  ConfigError nested(const std::string& prefix) const;

private:
  std::string invariant_;
  std::string detail_;
  std::string pointer_;
  std::optional<std::size_t> line_;
  std::string source_;
};

} // namespace mrdial
