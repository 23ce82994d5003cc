#ifndef PTP_LINK_HPP
#define PTP_LINK_HPP

#include "ptp/common.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace ptp {

struct LinkParams
{
  /// Bits per second in each direction; 0 means unlimited.
  double bandwidthBps = 1e6;
  Time latency = fromMillis(10);
  /// Packets admitted per direction, counting the one being serialized.
  std::size_t queueCapacity = 64;
};

/**
 * \brief Full-duplex point-to-point link with a drop-tail FIFO per direction.
 *
 * departure = max(now, previous departure) + size / bandwidth; arrival = departure + latency.
 * Direction 0 carries traffic from endpoint A to endpoint B.
 */
class Link
{
public:
  struct Counters
  {
    std::uint64_t sentPackets = 0;
    std::uint64_t droppedPackets = 0;
    std::uint64_t downDrops = 0;
  };

  Link(NodeId a, NodeId b, LinkParams params);

  NodeId
  endpoint(int side) const noexcept
  {
    return side == 0 ? m_a : m_b;
  }

  const LinkParams&
  params() const noexcept
  {
    return m_params;
  }

  bool
  isUp() const noexcept
  {
    return m_up;
  }

  void
  setUp(bool up);

  /// Bumped each time the link goes down; packets sent in an older epoch are lost.
  std::uint64_t
  epoch() const noexcept
  {
    return m_epoch;
  }

  /**
   * Admits a packet of \p bytes into direction \p dir at time \p now. Returns the arrival
   * time at the far end, or nullopt if it was dropped (queue full or link down).
   */
  std::optional<Time>
  transmit(int dir, std::size_t bytes, Time now);

  /// Packets in direction \p dir not yet fully serialized at \p now.
  std::size_t
  backlog(int dir, Time now);

  const Counters&
  counters(int dir) const noexcept
  {
    return m_dirs[dir].counters;
  }

private:
  struct Direction
  {
    std::deque<Time> departures;
    Time lastDeparture = 0;
    Counters counters;
  };

  NodeId m_a;
  NodeId m_b;
  LinkParams m_params;
  bool m_up = true;
  std::uint64_t m_epoch = 0;
  std::array<Direction, 2> m_dirs;
};

} // namespace ptp

#endif // PTP_LINK_HPP
