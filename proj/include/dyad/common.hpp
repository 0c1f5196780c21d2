#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dyad {

inline constexpr int kSchemaVersion = 1;

// Unusable input data: bad file, wrong schema, invalid configuration.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Event times are kept on a 1 ns grid so their decimal serialization
// round-trips exactly.
inline double quantize_time(double t_s) {
  return std::round(t_s * 1e9) / 1e9;
}

// Shortest decimal form that parses back to the same double.
inline std::string to_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Deterministic seed derivation for (batch seed, item index) pairs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dyad
