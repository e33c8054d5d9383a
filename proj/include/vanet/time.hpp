#pragma once

#include <cmath>
#include <cstdint>

namespace vanet {

// Protocol and simulation time in integer nanoseconds. Keeping time
// integral makes event ordering, wire encodings, and trace hashes
// bit-exact across platforms.
using SimTime = std::int64_t;
using Duration = std::int64_t;

constexpr Duration k_microsecond = 1'000;
constexpr Duration k_millisecond = 1'000'000;
constexpr Duration k_second = 1'000'000'000;

constexpr Duration milliseconds(std::int64_t ms) { return ms * k_millisecond; }
constexpr Duration seconds(std::int64_t s) { return s * k_second; }

inline Duration duration_from_seconds(double s) {
  return static_cast<Duration>(std::llround(s * 1e9));
}

inline Duration duration_from_millis(double ms) {
  return static_cast<Duration>(std::llround(ms * 1e6));
}

constexpr double to_seconds(Duration d) { return static_cast<double>(d) / 1e9; }
constexpr double to_millis(Duration d) { return static_cast<double>(d) / 1e6; }

}  // namespace vanet
