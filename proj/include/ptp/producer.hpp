#ifndef PTP_PRODUCER_HPP
#define PTP_PRODUCER_HPP

#include "ptp/node.hpp"

#include <vector>

namespace ptp {

struct CatalogEntry
{
  Name prefix;
  /// Number of packets in the object; 0 serves any SEQ.
  std::uint64_t packets = 0;
  std::uint32_t payloadSize = DEFAULT_PAYLOAD_SIZE;
};

/// Content origin: answers every Interest under a catalog prefix, NACKs the rest.
class Producer : public Node
{
public:
  Producer(NodeId id, FaceSender sender)
    : Node(id)
    , m_send(std::move(sender))
  {
  }

  void
  addCatalog(CatalogEntry entry);

  const std::vector<CatalogEntry>&
  catalog() const noexcept
  {
    return m_catalog;
  }

  void
  receive(FaceId face, Packet pkt) override;

  std::uint64_t
  served() const noexcept
  {
    return m_served;
  }

  std::uint64_t
  rejected() const noexcept
  {
    return m_rejected;
  }

private:
  FaceSender m_send;
  std::vector<CatalogEntry> m_catalog;
  std::uint64_t m_served = 0;
  std::uint64_t m_rejected = 0;
};

} // namespace ptp

#endif // PTP_PRODUCER_HPP
