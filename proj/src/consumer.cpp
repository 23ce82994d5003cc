#include "ptp/consumer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptp {

std::string_view
toString(PathStatus s)
{
  switch (s) {
    case PathStatus::InUse:
      return "in-use";
    case PathStatus::Unused:
      return "unused";
    case PathStatus::Disabled:
      return "disabled";
  }
  return "?";
}

Consumer::Consumer(NodeId id, ConsumerConfig config, Scheduler& scheduler, FaceSender sender,
                   std::mt19937_64& rng)
  : Node(id)
  , m_config(std::move(config))
  , m_scheduler(scheduler)
  , m_send(std::move(sender))
  , m_rng(rng)
{
  if (m_config.flow.name().empty()) {
    throw ConfigError("consumer " + std::to_string(id) + " has no flow name");
  }
  if (m_config.maxPaths == 0) {
    throw ConfigError("consumer " + std::to_string(id) + ": max paths must be positive");
  }
  if (!(m_config.probeRate > 0.0)) {
    throw ConfigError("consumer " + std::to_string(id) + ": probe rate must be positive");
  }
}

void
Consumer::addFace(FaceId face)
{
  m_faces.push_back(face);
}

void
Consumer::activate()
{
  if (m_faces.empty()) {
    throw ConfigError("consumer " + std::to_string(id()) + " is not attached to any link");
  }
  m_scheduler.schedule(std::max(m_config.start, m_scheduler.now()), [this] { start(); });
}

bool
Consumer::isActive() const
{
  Time now = m_scheduler.now();
  return now >= m_config.start && now < m_config.stop && !isComplete();
}

void
Consumer::start()
{
  probeTick();
  m_scheduler.scheduleAfter(m_config.switchPeriod, [this] { selectionTick(); });
  m_scheduler.scheduleAfter(m_config.bandwidthInterval, [this] { bandwidthTick(); });
}

Consumer::Binding&
Consumer::binding(std::uint64_t seq)
{
  if (seq >= m_bindings.size()) {
    m_bindings.resize(seq + 1);
  }
  return m_bindings[seq];
}

std::optional<std::uint64_t>
Consumer::nextUnrequested()
{
  if (m_config.totalPackets > 0 && m_nextSeq >= m_config.totalPackets) {
    return std::nullopt;
  }
  binding(m_nextSeq);
  return m_nextSeq++;
}

void
Consumer::probeTick()
{
  if (!isActive()) {
    return;
  }
  std::optional<std::uint64_t> seq = nextUnrequested();
  while (!seq && !m_pool.empty()) {
    std::uint64_t s = m_pool.front();
    m_pool.pop_front();
    if (!m_bindings[s].received && !m_bindings[s].live) {
      seq = s;
    }
  }
  if (seq) {
    Binding& b = binding(*seq);
    bool again = b.sent;
    b = Binding{PROBE_PATH, ++m_nextToken, m_scheduler.now(), true, again, true, false};
    Interest interest{m_config.flow.name().appendSequence(*seq), Tag{}, true};
    FaceId face = m_faces[m_probeFace++ % m_faces.size()];
    ++m_counters.probesSent;
    m_send(face, std::move(interest));
    std::uint64_t token = b.token;
    std::uint64_t s = *seq;
    m_scheduler.scheduleAfter(m_config.probeTimeout, [this, s, token] { onTimeout(s, token); });
  }
  m_scheduler.scheduleAfter(fromSeconds(1.0 / m_config.probeRate), [this] { probeTick(); });
}

void
Consumer::selectionTick()
{
  if (!isActive()) {
    return;
  }
  std::vector<PathCandidate> candidates;
  for (const auto& p : m_paths) {
    if (p.status == PathStatus::Disabled) {
      continue;
    }
    double latency = 0.0;
    if (m_config.strategy == SelectionStrategy::LatencyVariance && p.probeSamples > 0) {
      latency = p.probeRttSum / static_cast<double>(p.probeSamples);
    }
    else {
      latency = p.rtt.srtt();
    }
    candidates.push_back({p.id, p.status == PathStatus::InUse, p.measuredBandwidth,
                          p.tag.size(), latency});
  }
  SelectionChange change = selectPaths(m_config.strategy, candidates, m_config.maxPaths,
                                       m_config.varianceWindow, m_rng);
  for (auto id : change.demote) {
    demote(m_paths[id], PathStatus::Unused);
  }
  for (auto id : change.promote) {
    promote(m_paths[id]);
    ++m_counters.pathSwitches;
  }
  if (m_events.selection) {
    m_events.selection(m_scheduler.now(), paths());
  }
  m_scheduler.scheduleAfter(m_config.switchPeriod, [this] { selectionTick(); });
  pump();
}

void
Consumer::bandwidthTick()
{
  double seconds = toSeconds(m_config.bandwidthInterval);
  for (auto& p : m_paths) {
    if (p.status == PathStatus::InUse) {
      double sample = static_cast<double>(p.intervalBytes) * 8.0 / seconds;
      p.measuredBandwidth =
        m_config.bandwidthGain * sample + (1.0 - m_config.bandwidthGain) * p.measuredBandwidth;
    }
    p.intervalBytes = 0;
  }
  if (isActive()) {
    m_scheduler.scheduleAfter(m_config.bandwidthInterval, [this] { bandwidthTick(); });
  }
}

void
Consumer::receive(FaceId face, Packet pkt)
{
  if (auto* data = std::get_if<Data>(&pkt)) {
    onData(face, *data);
  }
  else if (auto* nack = std::get_if<Nack>(&pkt)) {
    onNack(*nack);
  }
}

void
Consumer::onData(FaceId face, const Data& data)
{
  std::uint64_t seq = 0;
  try {
    if (flowNameOf(data.name) != m_config.flow) {
      ++m_counters.staleData;
      return;
    }
    seq = sequenceOf(data.name);
  }
  catch (const Name::Error&) {
    ++m_counters.staleData;
    return;
  }
  if (seq >= m_bindings.size() || !m_bindings[seq].sent) {
    ++m_counters.staleData;
    return;
  }
  Binding& b = m_bindings[seq];
  if (b.received) {
    ++m_counters.duplicateData;
    return;
  }

  Time now = m_scheduler.now();
  b.received = true;
  ++m_receivedCount;
  ++m_counters.dataReceived;
  if (data.fromIntermediate) {
    ++m_counters.cacheData;
  }
  if (b.path >= 0) {
    auto& owner = m_paths[b.path];
    owner.deliveredBytes += data.payloadSize;
    owner.intervalBytes += data.payloadSize;
  }
  if (m_events.delivered) {
    m_events.delivered(now, b.path, data.payloadSize);
  }

  if (b.path == PROBE_PATH) {
    bool wasLive = b.live;
    b.live = false;
    if (wasLive) {
      onProbeData(face, seq, data);
    }
    pump();
    return;
  }
  if (!b.live) {
    pump();
    return;
  }
  b.live = false;

  PathRecord& p = m_paths[b.path];
  if (p.status != PathStatus::InUse) {
    pump();
    return;
  }
  PathState& ps = *p.state;
  auto it = ps.position.find(seq);
  if (it == ps.position.end()) {
    // sent during an earlier stint of this path as in-use
    pump();
    return;
  }
  std::uint64_t index = it->second;
  ps.position.erase(it);
  ps.sendQueue[index - ps.queueBase].received = true;
  --ps.inflight;
  ps.lastProgress = now;

  bool fromProducer = !data.fromIntermediate;
  std::vector<std::uint64_t> lost;
  if (fromProducer) {
    if (!b.retransmitted) {
      p.rtt.addSample(toSeconds(now - b.sentAt));
    }
    lost = detectLoss(ps, index);
  }
  for (auto s : lost) {
    m_bindings[s].live = false;
    --ps.inflight;
    ps.retransmit.push_back(s);
    ++m_counters.lossesDetected;
  }
  noteTransition(p, ps.window.onData(fromProducer, !lost.empty(), increment(p)));
  compact(ps);
  pump();
}

std::vector<std::uint64_t>
Consumer::detectLoss(PathState& ps, std::uint64_t index)
{
  std::uint64_t threshold = index;
  if (m_config.twoPacketLossDetection) {
    auto previous = ps.lastProducerIndex;
    ps.lastProducerIndex = index;
    if (!previous) {
      return {};
    }
    threshold = std::min(*previous, index);
  }
  std::vector<std::uint64_t> lost;
  for (std::uint64_t i = ps.queueBase; i < threshold; ++i) {
    SendElement& e = ps.sendQueue[i - ps.queueBase];
    if (!e.received && !e.lost) {
      e.lost = true;
      ps.position.erase(e.seq);
      lost.push_back(e.seq);
    }
  }
  return lost;
}

double
Consumer::increment(const PathRecord& p) const
{
  std::vector<PathSample> samples;
  std::size_t self = 0;
  double reference = std::numeric_limits<double>::infinity();
  for (const auto& q : m_paths) {
    if (q.status != PathStatus::InUse) {
      continue;
    }
    double rtt = std::max(m_config.rttFloor, q.rtt.hasSample() ? q.rtt.srtt() : q.rtt.rto());
    if (q.id == p.id) {
      self = samples.size();
    }
    samples.push_back({q.state->window.cwnd(), rtt});
    reference = std::min(reference, rtt);
  }
  if (m_config.referenceRtt) {
    reference = *m_config.referenceRtt;
  }
  return increaseStep(samples, self, reference, m_config.rttScaling);
}

void
Consumer::onProbeData(FaceId face, std::uint64_t seq, const Data& data)
{
  double sample = toSeconds(m_scheduler.now() - m_bindings[seq].sentAt);
  Tag tag = data.tag.value_or(Tag{});
  auto key = std::make_pair(face, tag);
  auto found = m_pathIndex.find(key);
  if (found == m_pathIndex.end()) {
    auto id = static_cast<std::uint32_t>(m_paths.size());
    PathRecord record{id, face, tag, PathStatus::Unused, RttEstimator(m_config.rto), 0.0, 0, 0.0, 0, 0, nullptr};
    record.rtt.addSample(sample);
    record.probeRttSum = sample;
    record.probeSamples = 1;
    m_paths.push_back(std::move(record));
    m_pathIndex.emplace(key, id);
    if (inUseCount() < m_config.maxPaths) {
      promote(m_paths.back());
    }
    return;
  }
  PathRecord& p = m_paths[found->second];
  p.probeRttSum += sample;
  ++p.probeSamples;
  if (p.status == PathStatus::Disabled) {
    p.status = PathStatus::Unused;
    if (inUseCount() < m_config.maxPaths) {
      promote(p);
    }
  }
}

void
Consumer::onNack(const Nack& nack)
{
  std::uint64_t seq = 0;
  try {
    if (flowNameOf(nack.name) != m_config.flow) {
      return;
    }
    seq = sequenceOf(nack.name);
  }
  catch (const Name::Error&) {
    return;
  }
  if (seq >= m_bindings.size() || !m_bindings[seq].sent || m_bindings[seq].received) {
    return;
  }
  ++m_counters.nacks;
  Binding& b = m_bindings[seq];
  if (b.path == PROBE_PATH) {
    if (b.live) {
      b.live = false;
      m_pool.push_back(seq);
    }
  }
  else if (m_paths[b.path].status == PathStatus::InUse) {
    demote(m_paths[b.path], PathStatus::Disabled);
    promoteRandomUnused();
  }
  else if (b.live) {
    b.live = false;
    m_pool.push_back(seq);
  }
  pump();
}

void
Consumer::onTimeout(std::uint64_t seq, std::uint64_t token)
{
  Binding& b = m_bindings[seq];
  if (b.received || !b.live || b.token != token) {
    return;
  }
  if (b.path != PROBE_PATH && m_paths[b.path].status == PathStatus::InUse) {
    const PathRecord& p = m_paths[b.path];
    Time deadline = std::max(b.sentAt, p.state->lastProgress) + fromSeconds(p.rtt.rto());
    if (deadline > m_scheduler.now()) {
      m_scheduler.schedule(deadline, [this, seq, token] { onTimeout(seq, token); });
      return;
    }
  }
  b.live = false;
  ++m_counters.timeouts;
  if (b.path == PROBE_PATH || m_paths[b.path].status != PathStatus::InUse ||
      m_paths[b.path].state->position.count(seq) == 0) {
    m_pool.push_back(seq);
    pump();
    return;
  }
  PathRecord& p = m_paths[b.path];
  PathState& ps = *p.state;
  auto it = ps.position.find(seq);
  ps.sendQueue[it->second - ps.queueBase].lost = true;
  ps.position.erase(it);
  --ps.inflight;
  ps.retransmit.push_back(seq);
  // one reaction per window: only Interests sent after the last reaction count
  if (b.sentAt >= ps.lastTimeoutReaction) {
    noteTransition(p, ps.window.onTimeout());
    ps.lastTimeoutReaction = m_scheduler.now();
    p.rtt.backoff();
  }
  compact(ps);
  pump();
}

void
Consumer::pump()
{
  if (!isActive()) {
    return;
  }
  for (auto& p : m_paths) {
    if (p.status == PathStatus::InUse) {
      fill(p);
    }
  }
}

void
Consumer::fill(PathRecord& p)
{
  PathState& ps = *p.state;
  while (static_cast<double>(ps.inflight) < ps.window.cwnd()) {
    auto seq = nextSeqFor(p);
    if (!seq) {
      break;
    }
    sendOnPath(p, *seq);
  }
}

std::optional<std::uint64_t>
Consumer::nextSeqFor(PathRecord& p)
{
  auto takeFrom = [this](std::deque<std::uint64_t>& queue) -> std::optional<std::uint64_t> {
    while (!queue.empty()) {
      std::uint64_t s = queue.front();
      queue.pop_front();
      if (!m_bindings[s].received && !m_bindings[s].live) {
        return s;
      }
    }
    return std::nullopt;
  };
  if (auto s = takeFrom(p.state->retransmit)) {
    return s;
  }
  if (auto s = takeFrom(m_pool)) {
    return s;
  }
  return nextUnrequested();
}

void
Consumer::sendOnPath(PathRecord& p, std::uint64_t seq)
{
  PathState& ps = *p.state;
  Binding& b = binding(seq);
  bool again = b.sent;
  b = Binding{static_cast<std::int32_t>(p.id), ++m_nextToken, m_scheduler.now(), true, again,
              true, false};
  if (again) {
    ++m_counters.retransmissions;
  }
  ps.sendQueue.push_back({seq});
  ps.position[seq] = ps.queueBase + ps.sendQueue.size() - 1;
  ++ps.inflight;
  ++m_counters.interestsSent;

  m_send(p.face, Interest{m_config.flow.name().appendSequence(seq), p.tag, false});
  std::uint64_t token = b.token;
  m_scheduler.scheduleAfter(fromSeconds(p.rtt.rto()), [this, seq, token] { onTimeout(seq, token); });
}

void
Consumer::promote(PathRecord& p)
{
  p.state = std::make_unique<PathState>(m_config.window);
  std::uint32_t id = p.id;
  p.state->window.setTrace([this, id](const WindowEvent& e) {
    if (m_events.window) {
      m_events.window(m_scheduler.now(), id, e);
    }
  });
  p.status = PathStatus::InUse;
  p.measuredBandwidth = 0.0;
  p.intervalBytes = 0;
  pump();
}

void
Consumer::demote(PathRecord& p, PathStatus status)
{
  PathState& ps = *p.state;
  std::vector<std::uint64_t> orphans(ps.retransmit.begin(), ps.retransmit.end());
  if (status == PathStatus::Disabled) {
    // Interests on a failed path will not come back; reissue them elsewhere.
    for (const auto& e : ps.sendQueue) {
      Binding& b = m_bindings[e.seq];
      if (!e.received && !e.lost && b.live && b.path == static_cast<std::int32_t>(p.id)) {
        b.live = false;
        orphans.push_back(e.seq);
      }
    }
  }
  p.state.reset();
  p.status = status;

  std::vector<PathRecord*> others;
  if (status == PathStatus::Disabled) {
    for (auto& q : m_paths) {
      if (q.status == PathStatus::InUse) {
        others.push_back(&q);
      }
    }
  }
  for (auto s : orphans) {
    if (others.empty()) {
      m_pool.push_back(s);
    }
    else {
      others[m_redistribute++ % others.size()]->state->retransmit.push_back(s);
    }
  }
}

void
Consumer::promoteRandomUnused()
{
  if (inUseCount() >= m_config.maxPaths) {
    return;
  }
  std::vector<std::uint32_t> unused;
  for (const auto& p : m_paths) {
    if (p.status == PathStatus::Unused) {
      unused.push_back(p.id);
    }
  }
  if (!unused.empty()) {
    promote(m_paths[unused[m_rng() % unused.size()]]);
    ++m_counters.pathSwitches;
  }
}

void
Consumer::compact(PathState& ps)
{
  while (!ps.sendQueue.empty() && (ps.sendQueue.front().received || ps.sendQueue.front().lost)) {
    ps.sendQueue.pop_front();
    ++ps.queueBase;
  }
}

void
Consumer::noteTransition(const PathRecord& p, std::optional<PhaseTransition> t)
{
  if (t && m_events.transition) {
    m_events.transition(m_scheduler.now(), p.id, *t);
  }
}

std::size_t
Consumer::inUseCount() const
{
  return static_cast<std::size_t>(std::count_if(m_paths.begin(), m_paths.end(), [](const auto& p) {
    return p.status == PathStatus::InUse;
  }));
}

PathSnapshot
Consumer::snapshot(const PathRecord& p) const
{
  PathSnapshot s{p.id, p.face, p.tag, p.status, 0.0, Phase::SlowStart, p.rtt.srtt(), p.rtt.rto(),
                 0, p.measuredBandwidth, p.deliveredBytes};
  if (p.state) {
    s.cwnd = p.state->window.cwnd();
    s.phase = p.state->window.phase();
    s.inflight = p.state->inflight;
  }
  return s;
}

std::vector<PathSnapshot>
Consumer::paths() const
{
  std::vector<PathSnapshot> out;
  out.reserve(m_paths.size());
  for (const auto& p : m_paths) {
    out.push_back(snapshot(p));
  }
  return out;
}

void
Consumer::checkInvariants() const
{
  if (inUseCount() > m_config.maxPaths) {
    throw std::logic_error("more in-use paths than allowed");
  }
  for (const auto& p : m_paths) {
    if ((p.status == PathStatus::InUse) != static_cast<bool>(p.state)) {
      throw std::logic_error("path state present exactly when in use");
    }
    if (!p.state) {
      continue;
    }
    const PathState& ps = *p.state;
    std::uint64_t pending = 0;
    for (std::size_t i = 0; i < ps.sendQueue.size(); ++i) {
      const auto& e = ps.sendQueue[i];
      if (e.received && e.lost) {
        throw std::logic_error("send-queue element both received and lost");
      }
      if (!e.received && !e.lost) {
        ++pending;
        const Binding& b = m_bindings[e.seq];
        auto it = ps.position.find(e.seq);
        if (!b.live || b.path != static_cast<std::int32_t>(p.id) || it == ps.position.end() ||
            it->second != ps.queueBase + i) {
          throw std::logic_error("pending element without a matching live binding");
        }
      }
    }
    if (pending != ps.inflight || ps.position.size() != ps.inflight) {
      throw std::logic_error("inflight does not match pending Interests");
    }
    if (ps.window.cwnd() < ps.window.params().cwndMin) {
      throw std::logic_error("cwnd below minimum");
    }
  }
}

} // namespace ptp
