#ifndef PTP_COMMON_HPP
#define PTP_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ptp {

/// Simulated time in integer nanoseconds. Integer ticks keep event ordering exact.
using Time = std::int64_t;

/// Interface identifier local to one node (1-based, in link declaration order).
using FaceId = std::uint32_t;

using NodeId = std::uint32_t;

constexpr Time NANOS_PER_SECOND = 1'000'000'000;

constexpr Time
fromSeconds(double s)
{
  return static_cast<Time>(s * static_cast<double>(NANOS_PER_SECOND) + (s >= 0 ? 0.5 : -0.5));
}

constexpr Time
fromMillis(double ms)
{
  return fromSeconds(ms / 1000.0);
}

constexpr double
toSeconds(Time t)
{
  return static_cast<double>(t) / static_cast<double>(NANOS_PER_SECOND);
}

/// Raised for malformed scenario/topology input. Carries the offending line when known.
class ConfigError : public std::runtime_error
{
public:
  explicit
  ConfigError(const std::string& what, int line = 0)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what)
    , m_line(line)
  {
  }

  int
  line() const noexcept
  {
    return m_line;
  }

private:
  int m_line;
};

} // namespace ptp

#endif // PTP_COMMON_HPP
