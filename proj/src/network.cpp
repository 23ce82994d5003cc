#include "ptp/network.hpp"

#include <algorithm>
#include <cmath>

namespace ptp {

namespace {

/// Consumer node without a configured flow; swallows whatever reaches it.
class Sink : public Node
{
public:
  using Node::Node;

  void
  receive(FaceId, Packet) override
  {
  }
};

} // namespace

Network::Network(const Scenario& scenario)
  : m_scenario(scenario)
  , m_rng(scenario.seed)
{
  validateScenario(m_scenario);
  const Scenario& s = m_scenario;

  for (const auto& n : s.nodes) {
    NodeId id = n.id;
    FaceSender sender = [this, id](FaceId face, Packet pkt) { send(id, face, std::move(pkt)); };
    NodeSlot slot{n.kind, nullptr, {}};
    switch (n.kind) {
      case NodeKind::Router:
        slot.node = std::make_unique<Router>(
          id, n.router, [this] { return m_scheduler.now(); }, sender);
        break;
      case NodeKind::Producer:
        slot.node = std::make_unique<Producer>(id, sender);
        break;
      case NodeKind::Consumer: {
        auto spec = std::find_if(s.consumers.begin(), s.consumers.end(),
                                 [id](const auto& c) { return c.node == id; });
        if (spec == s.consumers.end()) {
          slot.node = std::make_unique<Sink>(id);
        }
        else {
          slot.node = std::make_unique<Consumer>(id, spec->config, m_scheduler, sender, m_rng);
        }
        break;
      }
    }
    m_nodes.emplace(id, std::move(slot));
  }

  for (const auto& l : s.links) {
    std::size_t idx = m_links.size();
    m_links.emplace_back(l.a, l.b, l.params);
    std::array<FaceId, 2> faces{};
    for (int side = 0; side < 2; ++side) {
      NodeId id = side == 0 ? l.a : l.b;
      auto& sl = slot(id);
      sl.faces.push_back({idx, side});
      FaceId face = static_cast<FaceId>(sl.faces.size());
      faces[side] = face;
      if (auto* r = dynamic_cast<Router*>(sl.node.get())) {
        r->addFace(face);
      }
      else if (auto* c = dynamic_cast<Consumer*>(sl.node.get())) {
        c->addFace(face);
      }
    }
    m_linkFaces.push_back(faces);
  }

  for (const auto& r : s.routes) {
    std::vector<FaceId> faces;
    for (auto v : r.via) {
      faces.push_back(faceTowards(r.node, v));
    }
    router(r.node)->fib().insert(r.prefix, faces);
  }

  for (const auto& c : s.catalogs) {
    producer(c.node)->addCatalog(c.entry);
  }

  for (const auto& p : s.preseeds) {
    Router* r = router(p.node);
    if (r->cs().capacity() < p.count) {
      throw ConfigError("preseed exceeds content store capacity of node " +
                          std::to_string(p.node),
                        p.line);
    }
    // partial Fisher-Yates over [0, range)
    std::vector<std::uint64_t> pool(p.range);
    for (std::uint64_t i = 0; i < p.range; ++i) {
      pool[i] = i;
    }
    for (std::uint64_t i = 0; i < p.count; ++i) {
      std::uint64_t j = i + m_rng() % (p.range - i);
      std::swap(pool[i], pool[j]);
      r->cs().insert(Data{p.prefix.appendSequence(pool[i]), std::nullopt, false, p.payloadSize});
    }
  }

  m_report.scenario = s.name;
  m_report.seed = s.seed;
  m_report.duration = s.duration;
  m_report.bucket = s.bucket;
  m_report.windowStart = s.windowStart();
  std::size_t buckets = m_report.bucketCount();
  for (const auto& l : s.links) {
    for (int dir = 0; dir < 2; ++dir) {
      LinkSeries series;
      series.dir = dir == 0 ? DirectedLink{l.a, l.b} : DirectedLink{l.b, l.a};
      series.bandwidthBps = l.params.bandwidthBps;
      series.dataBits.assign(buckets, 0.0);
      series.bits.assign(buckets, 0.0);
      series.drops.assign(buckets, 0);
      m_report.links.push_back(std::move(series));
    }
  }

  for (const auto& spec : s.consumers) {
    m_flowIndex[spec.node] = m_report.flows.size();
    FlowSeries flow;
    flow.consumer = spec.node;
    flow.flow = spec.config.flow.toUri();
    flow.goodputBits.assign(buckets, 0.0);
    m_report.flows.push_back(std::move(flow));

    NodeId id = spec.node;
    Consumer::Events events;
    events.delivered = [this, id, buckets](Time t, std::int32_t path, std::uint32_t bytes) {
      auto b = static_cast<std::size_t>(t / m_report.bucket);
      if (b >= buckets) {
        return;
      }
      auto& f = m_report.flows[m_flowIndex[id]];
      double bits = 8.0 * bytes;
      f.goodputBits[b] += bits;
      auto& series = f.pathBits[path];
      if (series.empty()) {
        series.assign(buckets, 0.0);
      }
      series[b] += bits;
    };
    events.transition = [this, id](Time t, std::uint32_t path, const PhaseTransition& tr) {
      m_report.transitions.push_back({t, id, path, tr});
    };
    events.selection = [this, id](Time t, const std::vector<PathSnapshot>& paths) {
      for (const auto& p : paths) {
        m_report.selections.push_back({t, id, p});
      }
    };
    consumer(id)->setEvents(std::move(events));
    consumer(id)->activate();
  }

  for (const auto& step : s.scripts) {
    m_scheduler.schedule(step.at, [this, step] { setLinkUp(step.a, step.b, step.up); });
  }

  for (Time t = s.bucket; t <= s.duration; t += s.bucket) {
    m_scheduler.schedule(t, [this] { sample(); });
  }
}

Network::NodeSlot&
Network::slot(NodeId id)
{
  auto it = m_nodes.find(id);
  if (it == m_nodes.end()) {
    throw std::out_of_range("no node " + std::to_string(id));
  }
  return it->second;
}

const Network::NodeSlot&
Network::slot(NodeId id) const
{
  auto it = m_nodes.find(id);
  if (it == m_nodes.end()) {
    throw std::out_of_range("no node " + std::to_string(id));
  }
  return it->second;
}

Router*
Network::router(NodeId id)
{
  return dynamic_cast<Router*>(slot(id).node.get());
}

Consumer*
Network::consumer(NodeId id)
{
  return dynamic_cast<Consumer*>(slot(id).node.get());
}

Producer*
Network::producer(NodeId id)
{
  return dynamic_cast<Producer*>(slot(id).node.get());
}

FaceId
Network::faceTowards(NodeId node, NodeId neighbour) const
{
  const auto& faces = slot(node).faces;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const Link& l = m_links[faces[i].link];
    if (l.endpoint(1 - faces[i].side) == neighbour) {
      return static_cast<FaceId>(i + 1);
    }
  }
  return 0;
}

NodeId
Network::neighbourOf(NodeId node, FaceId face) const
{
  const auto& faces = slot(node).faces;
  if (face == 0 || face > faces.size()) {
    throw std::out_of_range("node " + std::to_string(node) + " has no face " +
                            std::to_string(face));
  }
  const auto& fb = faces[face - 1];
  return m_links[fb.link].endpoint(1 - fb.side);
}

void
Network::setLinkUp(NodeId a, NodeId b, bool up)
{
  FaceId fa = faceTowards(a, b);
  if (fa == 0) {
    throw std::out_of_range("no link between " + std::to_string(a) + " and " + std::to_string(b));
  }
  Link& link = m_links[slot(a).faces[fa - 1].link];
  if (link.isUp() == up) {
    return;
  }
  link.setUp(up);
  slot(a).node->onFaceStateChanged(fa, up);
  slot(b).node->onFaceStateChanged(faceTowards(b, a), up);
}

void
Network::setForwardObserver(Router::Observer observer)
{
  for (auto& [id, sl] : m_nodes) {
    if (auto* r = dynamic_cast<Router*>(sl.node.get())) {
      r->setObserver(observer);
    }
  }
}

void
Network::send(NodeId node, FaceId face, Packet pkt)
{
  auto& sl = slot(node);
  if (face == 0 || face > sl.faces.size()) {
    throw std::logic_error("node " + std::to_string(node) + " sent on missing face " +
                           std::to_string(face));
  }
  auto [idx, dir] = sl.faces[face - 1];
  Link& link = m_links[idx];
  std::size_t bytes = wireSize(pkt);
  Time now = m_scheduler.now();
  auto arrival = link.transmit(dir, bytes, now);
  if (!arrival) {
    auto b = static_cast<std::size_t>(now / m_report.bucket);
    auto& series = m_report.links[idx * 2 + dir];
    if (b < series.drops.size()) {
      ++series.drops[b];
    }
    return;
  }
  Time serialization = 0;
  if (link.params().bandwidthBps > 0) {
    serialization = static_cast<Time>(std::llround(static_cast<double>(bytes) * 8.0 /
                                                   link.params().bandwidthBps * NANOS_PER_SECOND));
  }
  Time start = *arrival - serialization;
  std::uint64_t epoch = link.epoch();
  m_scheduler.schedule(*arrival, [this, idx, dir, start, epoch, pkt = std::move(pkt)]() mutable {
    if (m_links[idx].epoch() != epoch) {
      return;
    }
    deliver(idx, dir, start, m_scheduler.now(), std::move(pkt));
  });
}

void
Network::record(std::vector<double>& series, Time start, Time end, double bits)
{
  Time bucket = m_report.bucket;
  if (end <= start) {
    auto b = static_cast<std::size_t>(end / bucket);
    if (b < series.size()) {
      series[b] += bits;
    }
    return;
  }
  double span = static_cast<double>(end - start);
  for (Time b0 = start / bucket * bucket; b0 < end; b0 += bucket) {
    auto b = static_cast<std::size_t>(b0 / bucket);
    if (b >= series.size()) {
      break;
    }
    Time lo = std::max(b0, start);
    Time hi = std::min(b0 + bucket, end);
    series[b] += bits * static_cast<double>(hi - lo) / span;
  }
}

void
Network::deliver(std::size_t idx, int dir, Time start, Time arrival, Packet pkt)
{
  auto& series = m_report.links[idx * 2 + dir];
  double bits = 8.0 * static_cast<double>(wireSize(pkt));
  record(series.bits, start, arrival, bits);
  if (std::holds_alternative<Data>(pkt)) {
    record(series.dataBits, start, arrival, bits);
  }
  const Link& link = m_links[idx];
  NodeId to = link.endpoint(1 - dir);
  FaceId face = m_linkFaces[idx][1 - dir];
  if (m_deliveryObserver) {
    m_deliveryObserver(to, face, pkt);
  }
  slot(to).node->receive(face, std::move(pkt));
}

void
Network::sample()
{
  Time now = m_scheduler.now();
  for (const auto& f : m_report.flows) {
    for (const auto& p : consumer(f.consumer)->paths()) {
      m_report.paths.push_back({now, f.consumer, p});
    }
  }
  for (auto& [id, sl] : m_nodes) {
    if (auto* r = dynamic_cast<Router*>(sl.node.get())) {
      r->pit().expire(now);
    }
  }
}

MetricsReport
Network::run()
{
  m_scheduler.runUntil(m_scenario.duration);
  for (auto& f : m_report.flows) {
    const Consumer* c = consumer(f.consumer);
    f.received = c->receivedCount();
    f.complete = c->isComplete();
    f.counters = c->counters();
  }
  m_report.routers.clear();
  for (auto& [id, sl] : m_nodes) {
    if (auto* r = dynamic_cast<Router*>(sl.node.get())) {
      m_report.routers.push_back({id, r->counters(), r->fab().stats(), r->cs().size()});
    }
  }
  m_report.events = m_scheduler.executed();
  return m_report;
}

MetricsReport
runScenario(const Scenario& scenario)
{
  Network network(scenario);
  return network.run();
}

} // namespace ptp
