#ifndef PTP_NODE_HPP
#define PTP_NODE_HPP

#include "ptp/packet.hpp"

#include <functional>

namespace ptp {

/// Sends a packet out of one of the owning node's faces.
using FaceSender = std::function<void(FaceId, Packet)>;

/// Anything attached to links: router, consumer or producer.
class Node
{
public:
  explicit
  Node(NodeId id)
    : m_id(id)
  {
  }

  virtual
  ~Node() = default;

  NodeId
  id() const noexcept
  {
    return m_id;
  }

  virtual void
  receive(FaceId face, Packet pkt) = 0;

  /// Link state change on one of this node's faces.
  virtual void
  onFaceStateChanged(FaceId, bool /*up*/)
  {
  }

private:
  NodeId m_id;
};

} // namespace ptp

#endif // PTP_NODE_HPP
