#include "mrdial/errors.hpp"

#include <utility>

namespace mrdial {

namespace {

std::string format_config_error(const std::string& invariant, const std::string& detail,
                                const std::string& pointer, std::optional<std::size_t> line,
                                const std::string& source) {
  std::string out;
  if (!source.empty()) {
    out += source;
    if (line) out += ":" + std::to_string(*line);
    out += ": ";
  } else if (line) {
    out += "line " + std::to_string(*line) + ": ";
  }
  out += "invariant violated: " + invariant;
  if (!detail.empty()) out += " (" + detail + ")";
  if (!pointer.empty()) out += " at " + pointer;
  return out;
}

} // namespace

ConfigError::ConfigError(std::string invariant, std::string detail, std::string pointer,
                         std::optional<std::size_t> line, std::string source)
    : std::runtime_error(format_config_error(invariant, detail, pointer, line, source)),
      invariant_(std::move(invariant)),
      detail_(std::move(detail)),
      pointer_(std::move(pointer)),
      line_(line),
      source_(std::move(source)) {}

ConfigError ConfigError::anchored(std::string source, std::optional<std::size_t> line) const {
  return ConfigError(invariant_, detail_, pointer_, line, std::move(source));
}

ConfigError ConfigError::nested(const std::string& prefix) const {
  return ConfigError(invariant_, detail_, prefix + pointer_, line_, source_);
}

} // namespace mrdial
