#ifndef MCRD_CORE_TEXT_HPP
#define MCRD_CORE_TEXT_HPP

#include <charconv>
#include <string>

namespace mcrd {

// Shortest round-trip decimal form, locale-independent; keeps CSV and JSON
// output byte-stable for identical inputs.
inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace mcrd

#endif
