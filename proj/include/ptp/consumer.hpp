#ifndef PTP_CONSUMER_HPP
#define PTP_CONSUMER_HPP

#include "ptp/congestion-window.hpp"
#include "ptp/linked-increase.hpp"
#include "ptp/node.hpp"
#include "ptp/path-selection.hpp"
#include "ptp/rtt-estimator.hpp"
#include "ptp/scheduler.hpp"

#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <unordered_map>

namespace ptp {

struct ConsumerConfig
{
  FlowName flow;
  /// Object size in packets; 0 fetches without end.
  std::uint64_t totalPackets = 0;
  Time start = 0;
  Time stop = std::numeric_limits<Time>::max();
  std::size_t maxPaths = 10;
  Time switchPeriod = fromSeconds(10);
  double probeRate = 10.0;
  Time probeTimeout = fromSeconds(4);
  WindowParams window;
  RttEstimator::Params rto;
  SelectionStrategy strategy = SelectionStrategy::Bandwidth;
  std::size_t varianceWindow = 10;
  bool twoPacketLossDetection = false;
  RttScaling rttScaling = RttScaling::PathOverReference;
  /// Fixed reference RTT in seconds; unset uses the minimum srtt over in-use paths.
  std::optional<double> referenceRtt;
  double bandwidthGain = 0.3;
  Time bandwidthInterval = fromSeconds(1);
  /// Lower bound applied to RTTs fed into the increase formula, in seconds.
  double rttFloor = 1e-3;
};

enum class PathStatus : std::uint8_t {
  InUse,
  Unused,
  Disabled,
};

std::string_view
toString(PathStatus s);

/// Sequence binding owner used for probe Interests.
constexpr std::int32_t PROBE_PATH = -1;

/// Read-only view of one path, for metrics.
struct PathSnapshot
{
  std::uint32_t id;
  FaceId face;
  Tag tag;
  PathStatus status;
  double cwnd;
  Phase phase;
  double srtt;
  double rto;
  std::uint64_t inflight;
  double measuredBandwidth;
  std::uint64_t deliveredBytes;
};

/**
 * \brief PTP consumer: probes for paths, pins Interests to up to N of them with tags and
 * runs one coupled congestion window per in-use path.
 */
class Consumer : public Node
{
public:
  struct Counters
  {
    std::uint64_t interestsSent = 0;
    std::uint64_t retransmissions = 0;
    std::uint64_t probesSent = 0;
    std::uint64_t dataReceived = 0;
    std::uint64_t duplicateData = 0;
    std::uint64_t staleData = 0;
    std::uint64_t cacheData = 0;
    std::uint64_t lossesDetected = 0;
    std::uint64_t timeouts = 0;
    std::uint64_t nacks = 0;
    std::uint64_t pathSwitches = 0;
  };

  struct Events
  {
    /// First delivery of a SEQ: path id (or PROBE_PATH) and payload bytes.
    std::function<void(Time, std::int32_t, std::uint32_t)> delivered;
    std::function<void(Time, std::uint32_t, const PhaseTransition&)> transition;
    std::function<void(Time, std::uint32_t, const WindowEvent&)> window;
    /// Path table after each periodic selection.
    std::function<void(Time, const std::vector<PathSnapshot>&)> selection;
  };

  Consumer(NodeId id, ConsumerConfig config, Scheduler& scheduler, FaceSender sender,
           std::mt19937_64& rng);

  void
  addFace(FaceId face);

  /// Schedules start, probing, selection and stop. Call once after faces are attached.
  void
  activate();

  void
  receive(FaceId face, Packet pkt) override;

  void
  setEvents(Events events)
  {
    m_events = std::move(events);
  }

  const ConsumerConfig&
  config() const noexcept
  {
    return m_config;
  }

  const Counters&
  counters() const noexcept
  {
    return m_counters;
  }

  std::uint64_t
  receivedCount() const noexcept
  {
    return m_receivedCount;
  }

  bool
  isReceived(std::uint64_t seq) const
  {
    return seq < m_bindings.size() && m_bindings[seq].received;
  }

  /// True once every SEQ of a finite object has arrived.
  bool
  isComplete() const noexcept
  {
    return m_config.totalPackets > 0 && m_receivedCount == m_config.totalPackets;
  }

  std::vector<PathSnapshot>
  paths() const;

  std::size_t
  inUseCount() const;

  /// Checks the per-path accounting invariants; throws std::logic_error on violation.
  void
  checkInvariants() const;

private:
  struct SendElement
  {
    std::uint64_t seq;
    bool received = false;
    bool lost = false;
  };

  struct PathState
  {
    explicit
    PathState(WindowParams params)
      : window(params)
    {
    }

    CongestionWindow window;
    std::deque<SendElement> sendQueue;
    std::uint64_t queueBase = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> position;
    std::deque<std::uint64_t> retransmit;
    std::uint64_t inflight = 0;
    std::optional<std::uint64_t> lastProducerIndex;
    Time lastTimeoutReaction = -1;
    /// Last Data arrival on the path; retransmission deadlines run from here, as in TCP.
    Time lastProgress = -1;
  };

  struct PathRecord
  {
    std::uint32_t id;
    FaceId face;
    Tag tag;
    PathStatus status = PathStatus::Unused;
    RttEstimator rtt;
    double probeRttSum = 0.0;
    std::uint64_t probeSamples = 0;
    double measuredBandwidth = 0.0;
    std::uint64_t intervalBytes = 0;
    std::uint64_t deliveredBytes = 0;
    std::unique_ptr<PathState> state;
  };

  struct Binding
  {
    std::int32_t path = PROBE_PATH;
    std::uint64_t token = 0;
    Time sentAt = 0;
    bool sent = false;
    bool retransmitted = false;
    bool live = false;
    bool received = false;
  };

private:
  bool
  isActive() const;

  void
  start();

  void
  probeTick();

  void
  selectionTick();

  void
  bandwidthTick();

  void
  onData(FaceId face, const Data& data);

  void
  onProbeData(FaceId face, std::uint64_t seq, const Data& data);

  void
  onNack(const Nack& nack);

  void
  onTimeout(std::uint64_t seq, std::uint64_t token);

  std::vector<std::uint64_t>
  detectLoss(PathState& ps, std::uint64_t index);

  double
  increment(const PathRecord& p) const;

  void
  pump();

  void
  fill(PathRecord& p);

  std::optional<std::uint64_t>
  nextSeqFor(PathRecord& p);

  std::optional<std::uint64_t>
  nextUnrequested();

  void
  sendOnPath(PathRecord& p, std::uint64_t seq);

  void
  promote(PathRecord& p);

  void
  demote(PathRecord& p, PathStatus status);

  void
  promoteRandomUnused();

  void
  compact(PathState& ps);

  Binding&
  binding(std::uint64_t seq);

  void
  noteTransition(const PathRecord& p, std::optional<PhaseTransition> t);

  PathSnapshot
  snapshot(const PathRecord& p) const;

private:
  ConsumerConfig m_config;
  Scheduler& m_scheduler;
  FaceSender m_send;
  std::mt19937_64& m_rng;
  Events m_events;
  std::vector<FaceId> m_faces;
  std::size_t m_probeFace = 0;

  std::vector<PathRecord> m_paths;
  std::map<std::pair<FaceId, Tag>, std::uint32_t> m_pathIndex;
  std::vector<Binding> m_bindings;
  std::deque<std::uint64_t> m_pool;
  std::uint64_t m_nextSeq = 0;
  std::uint64_t m_nextToken = 0;
  std::uint64_t m_receivedCount = 0;
  std::size_t m_redistribute = 0;
  Counters m_counters;
};

} // namespace ptp

#endif // PTP_CONSUMER_HPP
