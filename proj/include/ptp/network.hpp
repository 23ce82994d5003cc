#ifndef PTP_NETWORK_HPP
#define PTP_NETWORK_HPP

#include "ptp/consumer.hpp"
#include "ptp/forwarder.hpp"
#include "ptp/link.hpp"
#include "ptp/metrics.hpp"
#include "ptp/producer.hpp"
#include "ptp/scenario.hpp"
#include "ptp/scheduler.hpp"

#include <array>
#include <functional>
#include <memory>
#include <random>

namespace ptp {

/**
 * \brief One simulation run: instantiates a scenario's nodes and links on a single event
 * loop and collects metrics.
 *
 * Faces are numbered from 1 on each node in link declaration order.
 */
class Network
{
public:
  explicit
  Network(const Scenario& scenario);

  Network(const Network&) = delete;
  Network&
  operator=(const Network&) = delete;

  /// Runs to the scenario duration and returns the collected report.
  MetricsReport
  run();

  Scheduler&
  scheduler() noexcept
  {
    return m_scheduler;
  }

  Router*
  router(NodeId id);

  Consumer*
  consumer(NodeId id);

  Producer*
  producer(NodeId id);

  /// Face on \p node leading to \p neighbour; 0 if not adjacent.
  FaceId
  faceTowards(NodeId node, NodeId neighbour) const;

  /// Neighbour reached through \p face of \p node.
  NodeId
  neighbourOf(NodeId node, FaceId face) const;

  void
  setLinkUp(NodeId a, NodeId b, bool up);

  /// Observer installed on every router.
  void
  setForwardObserver(Router::Observer observer);

  using DeliveryObserver = std::function<void(NodeId, FaceId, const Packet&)>;

  /// Called for every packet handed to a node, before the node sees it.
  void
  setDeliveryObserver(DeliveryObserver observer)
  {
    m_deliveryObserver = std::move(observer);
  }

  /// Injects a packet as if \p node sent it out of \p face now.
  void
  send(NodeId node, FaceId face, Packet pkt);

private:
  struct FaceBinding
  {
    std::size_t link;
    int side;
  };

  struct NodeSlot
  {
    NodeKind kind;
    std::unique_ptr<Node> node;
    std::vector<FaceBinding> faces;
  };

  NodeSlot&
  slot(NodeId id);

  const NodeSlot&
  slot(NodeId id) const;

  void
  deliver(std::size_t link, int dir, Time start, Time arrival, Packet pkt);

  void
  record(std::vector<double>& series, Time start, Time end, double bits);

  void
  sample();

private:
  Scenario m_scenario;
  Scheduler m_scheduler;
  std::mt19937_64 m_rng;
  std::map<NodeId, NodeSlot> m_nodes;
  std::vector<Link> m_links;
  /// Face ids at the a and b ends of each link.
  std::vector<std::array<FaceId, 2>> m_linkFaces;
  MetricsReport m_report;
  std::map<NodeId, std::size_t> m_flowIndex;
  DeliveryObserver m_deliveryObserver;
};

/// Parses nothing, builds and runs: the report for \p scenario.
MetricsReport
runScenario(const Scenario& scenario);

} // namespace ptp

#endif // PTP_NETWORK_HPP
