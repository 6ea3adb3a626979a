#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace mrdial {

/// FNV-1a over a canonical byte stream. Doubles are snapped to a 1e-9 grid
/// first so the digest does not depend on the last bits of a platform's
/// floating point.
class StateHasher {
public:
  StateHasher& add(std::uint64_t v) noexcept {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xffU;
      h_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  StateHasher& add(std::int64_t v) noexcept { return add(static_cast<std::uint64_t>(v)); }
  StateHasher& add(int v) noexcept { return add(static_cast<std::int64_t>(v)); }
  StateHasher& add_quantized(double v) noexcept {
    return add(static_cast<std::int64_t>(std::llround(v * 1e9)));
  }

  std::uint64_t value() const noexcept { return h_; }

private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

/// "0x" followed by 16 lowercase hex digits.
inline std::string hash_to_hex(std::uint64_t h) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = "0x";
  for (int shift = 60; shift >= 0; shift -= 4) out += digits[(h >> shift) & 0xfU];
  return out;
}

} // namespace mrdial
