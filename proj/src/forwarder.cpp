#include "ptp/forwarder.hpp"

#include <algorithm>

namespace ptp {

Router::Router(NodeId id, RouterConfig config, Clock clock, FaceSender sender)
  : Node(id)
  , m_config(config)
  , m_clock(std::move(clock))
  , m_send(std::move(sender))
  , m_fab(config.fabCapacity)
  , m_cs(config.csCapacity)
{
}

void
Router::addFace(FaceId face)
{
  m_faces[face] = true;
}

bool
Router::isFaceUp(FaceId face) const
{
  auto it = m_faces.find(face);
  return it != m_faces.end() && it->second;
}

void
Router::receive(FaceId face, Packet pkt)
{
  if (auto* i = std::get_if<Interest>(&pkt)) {
    onInterest(face, std::move(*i));
  }
  else if (auto* d = std::get_if<Data>(&pkt)) {
    onData(face, std::move(*d));
  }
  else {
    onNack(face, std::get<Nack>(std::move(pkt)));
  }
}

void
Router::onFaceStateChanged(FaceId face, bool up)
{
  if (up) {
    onLinkUp(face);
  }
  else {
    onLinkDown(face);
  }
}

void
Router::emit(FaceId face, Packet pkt)
{
  m_send(face, std::move(pkt));
}

void
Router::sendNack(FaceId face, const Name& name, NackReason reason)
{
  ++m_counters.nacksOut;
  emit(face, Nack{name, reason});
}

FaceId
Router::pickEqualWeight(const FibEntry& entry, FaceId inFace)
{
  std::vector<FaceId> eligible;
  for (FaceId f : entry.faces) {
    if (f != inFace && isFaceUp(f)) {
      eligible.push_back(f);
    }
  }
  if (eligible.empty()) {
    return 0;
  }
  auto& cursor = m_roundRobin[entry.prefix.toUri()];
  FaceId chosen = eligible[cursor % eligible.size()];
  ++cursor;
  return chosen;
}

void
Router::forwardInterest(FaceId inFace, Interest interest, FaceId outFace, PitEntry* existing)
{
  Time now = m_clock();
  PitEntry* entry = existing;
  if (entry == nullptr) {
    entry = &m_pit.insert(interest.name, now + m_config.pitLifetime);
    entry->downstream.push_back({inFace, false, now});
    entry->probe = interest.probe;
  }
  else {
    entry->expiry = now + m_config.pitLifetime;
  }
  if (!entry->usesUpstream(outFace)) {
    entry->upstream.push_back(outFace);
  }

  ++m_counters.interestsOut;
  if (m_observer) {
    m_observer({id(), ForwardRecord::Kind::Interest, inFace, outFace, interest.name, interest.probe});
  }
  emit(outFace, std::move(interest));
}

void
Router::onInterest(FaceId inFace, Interest interest)
{
  ++m_counters.interestsIn;
  if (interest.hopBudget == 0) {
    ++m_counters.hopLimitDrops;
    return;
  }
  --interest.hopBudget;
  Time now = m_clock();

  if (!interest.probe) {
    if (auto cached = m_cs.find(interest.name)) {
      ++m_counters.csHits;
      m_counters.lastCsHit = now;
      cached->fromIntermediate = true;
      ++m_counters.dataOut;
      emit(inFace, std::move(*cached));
      return;
    }
  }

  PitEntry* pending = m_pit.find(interest.name, now);
  if (pending != nullptr && pending->findDownstream(inFace) == nullptr) {
    pending->downstream.push_back({inFace, true, now});
    ++m_counters.aggregated;
    return;
  }
  // otherwise a repeat from a recorded downstream: the earlier copy was lost, forward again

  const FibEntry* route = resolve(m_fib, m_fab, interest.name);
  if (route == nullptr) {
    sendNack(inFace, interest.name, NackReason::NoRoute);
    return;
  }

  if (interest.tag && !interest.tag->empty()) {
    FaceId wanted = interest.tag->pop();
    bool listed = std::find(route->faces.begin(), route->faces.end(), wanted) != route->faces.end();
    if (listed && wanted != inFace && isFaceUp(wanted)) {
      forwardInterest(inFace, std::move(interest), wanted, pending);
      return;
    }

    FaceId fallback = pickEqualWeight(*route, inFace);
    if (fallback == 0) {
      sendNack(inFace, interest.name, NackReason::NoRoute);
      return;
    }
    ++m_counters.pathFailures;
    sendNack(inFace, interest.name, NackReason::PathFailure);
    interest.tag.reset();
    forwardInterest(inFace, std::move(interest), fallback, pending);
    return;
  }

  FaceId out = pickEqualWeight(*route, inFace);
  if (out == 0) {
    sendNack(inFace, interest.name, NackReason::NoRoute);
    return;
  }
  forwardInterest(inFace, std::move(interest), out, pending);
}

void
Router::onData(FaceId inFace, Data data)
{
  ++m_counters.dataIn;
  Time now = m_clock();
  PitEntry* entry = m_pit.find(data.name, now);
  if (entry == nullptr) {
    ++m_counters.unsolicitedData;
    return;
  }

  bool probeReply = data.tag.has_value() || entry->probe;
  if (data.tag) {
    data.tag->push(inFace);
  }
  if (!probeReply && m_config.csAdmit) {
    m_cs.insert(data);
  }

  auto downstream = std::move(entry->downstream);
  m_pit.erase(data.name);
  for (const auto& d : downstream) {
    Data copy = data;
    copy.fromIntermediate = data.fromIntermediate || d.aggregated;
    ++m_counters.dataOut;
    if (m_observer) {
      m_observer({id(), ForwardRecord::Kind::Data, inFace, d.face, data.name, probeReply});
    }
    emit(d.face, std::move(copy));
  }
}

void
Router::onNack(FaceId inFace, Nack nack)
{
  ++m_counters.nacksIn;
  Time now = m_clock();
  PitEntry* entry = m_pit.find(nack.name, now);
  if (entry == nullptr) {
    return;
  }
  auto downstream = entry->downstream;
  // a path-failure NACK may be followed by Data from the fallback route, so keep the entry
  if (nack.reason == NackReason::NoRoute) {
    std::erase(entry->upstream, inFace);
    if (entry->upstream.empty()) {
      m_pit.erase(nack.name);
    }
  }
  for (const auto& d : downstream) {
    sendNack(d.face, nack.name, nack.reason);
  }
}

void
Router::onLinkDown(FaceId face)
{
  if (!isFaceUp(face)) {
    return;
  }
  m_faces[face] = false;
  Time now = m_clock();
  for (const auto& name : m_pit.entriesUsingUpstream(face, now)) {
    PitEntry* entry = m_pit.find(name, now);
    auto downstream = std::move(entry->downstream);
    m_pit.erase(name);
    for (const auto& d : downstream) {
      sendNack(d.face, name, NackReason::PathFailure);
    }
  }
}

void
Router::onLinkUp(FaceId face)
{
  m_faces[face] = true;
}

} // namespace ptp
