#ifndef PTP_FORWARDER_HPP
#define PTP_FORWARDER_HPP

#include "ptp/content-store.hpp"
#include "ptp/fab.hpp"
#include "ptp/fib.hpp"
#include "ptp/node.hpp"
#include "ptp/pit.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>

namespace ptp {

struct RouterConfig
{
  std::size_t fabCapacity = Fab::DEFAULT_CAPACITY;
  std::size_t csCapacity = 1000;
  /// When false the store only serves pre-seeded packets.
  bool csAdmit = true;
  Time pitLifetime = fromSeconds(4);
};

/// One forwarding decision, reported to an optional observer.
struct ForwardRecord
{
  enum class Kind { Interest, Data };

  NodeId node = 0;
  Kind kind = Kind::Interest;
  FaceId inFace = 0;
  FaceId outFace = 0;
  Name name;
  bool probe = false;
};

/**
 * \brief Per-router engine: PIT with aggregation, content store, path-specified forwarding
 * with name-based fallback, probe handling and NACK generation.
 *
 * Interest pipeline, in order:
 *  1. non-probe CS hit: reply from cache, flagged as intermediate
 *  2. PIT hit from a new face: aggregate; from a recorded face: treat as retransmission
 *  3. tagged: pop a face and forward on it if it is up and listed in the FIB entry
 *  4. popped face unusable: drop the tag, forward by name and NACK the path downstream
 *  5. untagged or probe: equal-weight round robin over the FIB entry
 *  6. no route or no eligible face: NACK(NoRoute)
 */
class Router : public Node
{
public:
  struct Counters
  {
    std::uint64_t interestsIn = 0;
    std::uint64_t interestsOut = 0;
    std::uint64_t dataIn = 0;
    std::uint64_t dataOut = 0;
    std::uint64_t nacksIn = 0;
    std::uint64_t nacksOut = 0;
    std::uint64_t csHits = 0;
    std::uint64_t aggregated = 0;
    std::uint64_t pathFailures = 0;
    std::uint64_t hopLimitDrops = 0;
    std::uint64_t unsolicitedData = 0;
    Time lastCsHit = -1;
  };

  using Clock = std::function<Time()>;
  using Observer = std::function<void(const ForwardRecord&)>;

  Router(NodeId id, RouterConfig config, Clock clock, FaceSender sender);

  void
  addFace(FaceId face);

  bool
  isFaceUp(FaceId face) const;

  Fib&
  fib() noexcept
  {
    return m_fib;
  }

  const Fab&
  fab() const noexcept
  {
    return m_fab;
  }

  ContentStore&
  cs() noexcept
  {
    return m_cs;
  }

  Pit&
  pit() noexcept
  {
    return m_pit;
  }

  const Counters&
  counters() const noexcept
  {
    return m_counters;
  }

  void
  setObserver(Observer observer)
  {
    m_observer = std::move(observer);
  }

  void
  receive(FaceId face, Packet pkt) override;

  void
  onFaceStateChanged(FaceId face, bool up) override;

  void
  onInterest(FaceId inFace, Interest interest);

  void
  onData(FaceId inFace, Data data);

  void
  onNack(FaceId inFace, Nack nack);

  /// Marks \p face down and NACKs every pending Interest that was forwarded over it.
  void
  onLinkDown(FaceId face);

  void
  onLinkUp(FaceId face);

private:
  /// Next face by per-prefix round robin, skipping \p inFace and down faces. 0 if none.
  FaceId
  pickEqualWeight(const FibEntry& entry, FaceId inFace);

  void
  forwardInterest(FaceId inFace, Interest interest, FaceId outFace, PitEntry* existing);

  void
  sendNack(FaceId face, const Name& name, NackReason reason);

  void
  emit(FaceId face, Packet pkt);

private:
  RouterConfig m_config;
  Clock m_clock;
  FaceSender m_send;
  Observer m_observer;
  Fib m_fib;
  Fab m_fab;
  Pit m_pit;
  ContentStore m_cs;
  std::map<FaceId, bool> m_faces;
  std::map<std::string, std::size_t> m_roundRobin;
  Counters m_counters;
};

} // namespace ptp

#endif // PTP_FORWARDER_HPP
