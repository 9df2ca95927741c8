#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace bandit {

// All reals are serialized with 17 significant digits (round-trip exact),
// locale-independent.
inline std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format_int(long long x) { return std::to_string(x); }

}  // namespace bandit
