#include "json_util.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace mrdial::detail {

namespace {

// Minimal scanner over already-validated JSON text, tracking line numbers.
class Scanner {
public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::optional<std::size_t> find(const std::vector<std::string>& path) {
    skip_ws();
    return descend(path, 0);
  }

private:
  std::optional<std::size_t> descend(const std::vector<std::string>& path, std::size_t depth) {
    skip_ws();
    if (depth == path.size()) return line_;
    if (at_end()) return std::nullopt;
    const char c = text_[pos_];
    if (c == '{') {
      advance();
      for (;;) {
        skip_ws();
        if (peek() == '}') return std::nullopt;
        const std::string key = read_string();
        skip_ws();
        advance(); // ':'
        if (key == path[depth]) return descend(path, depth + 1);
        skip_value();
        skip_ws();
        if (peek() == ',') advance();
        else return std::nullopt;
      }
    }
    if (c == '[') {
      advance();
      std::size_t wanted = 0;
      try {
        wanted = std::stoul(path[depth]);
      } catch (const std::exception&) {
        return std::nullopt;
      }
      for (std::size_t i = 0;; ++i) {
        skip_ws();
        if (peek() == ']') return std::nullopt;
        if (i == wanted) return descend(path, depth + 1);
        skip_value();
        skip_ws();
        if (peek() == ',') advance();
        else return std::nullopt;
      }
    }
    return std::nullopt;
  }

  void skip_value() {
    skip_ws();
    if (at_end()) return;
    const char c = text_[pos_];
    if (c == '"') {
      read_string();
    } else if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      advance();
      skip_ws();
      if (peek() == close) {
        advance();
        return;
      }
      for (;;) {
        if (c == '{') {
          read_string();
          skip_ws();
          advance();
        }
        skip_value();
        skip_ws();
        if (peek() == ',') {
          advance();
          skip_ws();
        } else {
          advance();
          return;
        }
      }
    } else {
      while (!at_end() && text_[pos_] != ',' && text_[pos_] != '}' && text_[pos_] != ']' &&
             !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      }
    }
  }

  std::string read_string() {
    std::string out;
    advance(); // opening quote
    while (!at_end() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        advance();
        if (at_end()) break;
        switch (text_[pos_]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '/': out += '/'; break;
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          default: out += text_[pos_]; break;
        }
      } else {
        out += text_[pos_];
      }
      advance();
    }
    advance(); // closing quote
    return out;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  bool at_end() const { return pos_ >= text_.size(); }
  void advance() {
    if (at_end()) return;
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::vector<std::string> split_pointer(std::string_view pointer) {
  std::vector<std::string> parts;
  if (pointer.empty()) return parts;
  std::size_t start = pointer.front() == '/' ? 1 : 0;
  for (;;) {
    const std::size_t slash = pointer.find('/', start);
    std::string token(pointer.substr(start, slash - start));
    for (std::size_t p = 0; (p = token.find('~', p)) != std::string::npos; ++p) {
      if (p + 1 < token.size()) token.replace(p, 2, token[p + 1] == '1' ? "/" : "~");
    }
    parts.push_back(std::move(token));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return parts;
}

std::string owner_invariant(const std::string& owner, std::string_view key, const char* what) {
  return owner + "." + std::string(key) + " " + what;
}

} // namespace

std::optional<std::size_t> line_of(std::string_view text, std::string_view pointer) {
  return Scanner(text).find(split_pointer(pointer));
}

json parse_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Count lines up to the failing byte.
    std::size_t line = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < limit; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError("well-formed JSON", e.what(), {}, line, source);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("readable file", "cannot open '" + path + "'", {}, std::nullopt, path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void rethrow_anchored(const ConfigError& e, std::string_view text, const std::string& source) {
  std::optional<std::size_t> line = e.line();
  if (!line && !e.pointer().empty()) {
    // Walk up the pointer until some ancestor exists in the text.
    std::string ptr = e.pointer();
    while (!ptr.empty() && !(line = line_of(text, ptr))) {
      ptr.erase(ptr.rfind('/'));
    }
    if (!line) line = 1;
  }
  throw e.anchored(source, line);
}

const json& require(const json& obj, std::string_view key, const std::string& ptr,
                    const std::string& owner) {
  if (!obj.is_object()) {
    throw ConfigError(owner + " is an object", "expected a JSON object", ptr);
  }
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) {
    throw ConfigError(owner_invariant(owner, key, "is present"), "missing field", child(ptr, key));
  }
  return *it;
}

double number(const json& obj, std::string_view key, const std::string& ptr,
              const std::string& owner) {
  const json& v = require(obj, key, ptr, owner);
  if (!v.is_number()) {
    throw ConfigError(owner_invariant(owner, key, "is a number"), "got " + v.dump(), child(ptr, key));
  }
  return v.get<double>();
}

double number_or(const json& obj, std::string_view key, double fallback, const std::string& ptr,
                 const std::string& owner) {
  if (obj.is_object() && !obj.contains(std::string(key))) return fallback;
  return number(obj, key, ptr, owner);
}

long long integer(const json& obj, std::string_view key, const std::string& ptr,
                  const std::string& owner) {
  const json& v = require(obj, key, ptr, owner);
  if (!v.is_number_integer()) {
    throw ConfigError(owner_invariant(owner, key, "is an integer"), "got " + v.dump(),
                      child(ptr, key));
  }
  return v.get<long long>();
}

long long integer_or(const json& obj, std::string_view key, long long fallback,
                     const std::string& ptr, const std::string& owner) {
  if (obj.is_object() && !obj.contains(std::string(key))) return fallback;
  return integer(obj, key, ptr, owner);
}

std::string string(const json& obj, std::string_view key, const std::string& ptr,
                   const std::string& owner) {
  const json& v = require(obj, key, ptr, owner);
  if (!v.is_string()) {
    throw ConfigError(owner_invariant(owner, key, "is a string"), "got " + v.dump(), child(ptr, key));
  }
  return v.get<std::string>();
}

} // namespace mrdial::detail
