#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mrdial/errors.hpp"

namespace mrdial::detail {

using json = nlohmann::json;

/// 1-based line of the value addressed by `pointer` inside `text`, which
/// must already be valid JSON. Returns nullopt if the path does not exist.
std::optional<std::size_t> line_of(std::string_view text, std::string_view pointer);

/// Parses `text`; syntax errors become ConfigError with the parser's line.
json parse_text(std::string_view text, const std::string& source);

/// Reads a whole file; unreadable files become ConfigError.
std::string read_file(const std::string& path);

/// Re-throws `e` anchored to the line of its pointer in `text`.
[[noreturn]] void rethrow_anchored(const ConfigError& e, std::string_view text,
                                   const std::string& source);

inline std::string child(const std::string& ptr, std::string_view key) {
  return ptr + "/" + std::string(key);
}
inline std::string child(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

const json& require(const json& obj, std::string_view key, const std::string& ptr,
                    const std::string& owner);
double number(const json& obj, std::string_view key, const std::string& ptr,
              const std::string& owner);
double number_or(const json& obj, std::string_view key, double fallback, const std::string& ptr,
                 const std::string& owner);
long long integer(const json& obj, std::string_view key, const std::string& ptr,
                  const std::string& owner);
long long integer_or(const json& obj, std::string_view key, long long fallback,
                     const std::string& ptr, const std::string& owner);
std::string string(const json& obj, std::string_view key, const std::string& ptr,
                   const std::string& owner);

} // namespace mrdial::detail
