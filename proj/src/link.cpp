#include "ptp/link.hpp"

#include <algorithm>
#include <cmath>

namespace ptp {

Link::Link(NodeId a, NodeId b, LinkParams params)
  : m_a(a)
  , m_b(b)
  , m_params(params)
{
  if (params.bandwidthBps < 0 || params.latency < 0) {
    throw ConfigError("link bandwidth and latency must be non-negative");
  }
  if (params.queueCapacity == 0) {
    throw ConfigError("link queue capacity must be at least one packet");
  }
}

void
Link::setUp(bool up)
{
  if (m_up && !up) {
    ++m_epoch;
    for (auto& d : m_dirs) {
      d.departures.clear();
    }
  }
  m_up = up;
}

std::size_t
Link::backlog(int dir, Time now)
{
  auto& d = m_dirs[dir];
  while (!d.departures.empty() && d.departures.front() <= now) {
    d.departures.pop_front();
  }
  return d.departures.size();
}

std::optional<Time>
Link::transmit(int dir, std::size_t bytes, Time now)
{
  auto& d = m_dirs[dir];
  if (!m_up) {
    ++d.counters.downDrops;
    return std::nullopt;
  }
  if (backlog(dir, now) >= m_params.queueCapacity) {
    ++d.counters.droppedPackets;
    return std::nullopt;
  }
  Time serialization = 0;
  if (m_params.bandwidthBps > 0) {
    serialization = static_cast<Time>(std::llround(static_cast<double>(bytes) * 8.0 /
                                                   m_params.bandwidthBps * NANOS_PER_SECOND));
  }
  Time departure = std::max(now, d.lastDeparture) + serialization;
  d.lastDeparture = departure;
  d.departures.push_back(departure);
  ++d.counters.sentPackets;
  return departure + m_params.latency;
}

} // namespace ptp
