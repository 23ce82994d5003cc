// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "oracles.hpp"

#include "ptp/fab.hpp"
#include "ptp/linked-increase.hpp"
#include "ptp/max-flow.hpp"
#include "ptp/network.hpp"
#include "ptp/report.hpp"

#include <fmt/core.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace ptp;

namespace {

struct Outcome
{
  bool pass = true;
  std::string detail;

  void
  fail(const std::string& why)
  {
    if (pass) {
      detail = why;
    }
    pass = false;
  }
};

int g_failures = 0;

void
report(const char* id, const char* what, const Outcome& o)
{
  fmt::print("{} {}: {}{}\n", o.pass ? "PASS" : "FAIL", id, what,
             o.detail.empty() ? "" : " (" + o.detail + ")");
  std::fflush(stdout);
  if (!o.pass) {
    ++g_failures;
  }
}

Scenario
builtin(const std::string& name)
{
  Scenario s = parseScenario(std::string(*builtinScenarioText(name)));
  validateScenario(s);
  return s;
}

/// Every report produced by the run, for the state-machine check.
std::vector<std::pair<std::string, MetricsReport>> g_reports;

MetricsReport
run(const Scenario& s)
{
  MetricsReport r = runScenario(s);
  g_reports.emplace_back(s.name, r);
  return r;
}

// Utilization per directed link as published for the hierarchical mesh.
struct TableRow
{
  NodeId from;
  NodeId to;
  double utilization;
};

const TableRow TABLE_I[] = {
  {2, 1, 96.4},  {3, 2, 96.0},  {4, 2, 95.1},  {8, 2, 96.3},  {7, 3, 95.9},  {9, 3, 96.5},
  {7, 4, 95.5},  {5, 4, 98.5},  {11, 4, 96.5}, {5, 8, 96.5},  {6, 8, 96.0},  {12, 6, 99.0},
  {11, 5, 98.5}, {10, 5, 97.5}, {10, 7, 96.5}, {9, 7, 96.0},
};

Outcome
meshReproduction()
{
  Outcome o;
  Scenario s = builtin("scenario5");
  auto start = std::chrono::steady_clock::now();
  MetricsReport r = run(s);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  double kbps = r.throughputBps({2, 1}) / 1e3;
  if (kbps < 1330) {
    o.fail(fmt::format("2>1 {:.1f} Kbps", kbps));
  }
  double worst = 0.0;
  for (const auto& row : TABLE_I) {
    double u = r.utilization({row.from, row.to});
    worst = std::max(worst, std::abs(u - row.utilization));
    if (std::abs(u - row.utilization) > 4.0) {
      o.fail(fmt::format("{}>{} at {:.2f}% vs {:.1f}%", row.from, row.to, u, row.utilization));
    }
  }
  double redundant = 0.0;
  for (DirectedLink d : {DirectedLink{3, 4}, {4, 3}, {5, 7}, {7, 5}}) {
    redundant = std::max(redundant, r.utilization(d));
  }
  if (redundant >= 5.0) {
    o.fail(fmt::format("redundant link at {:.2f}%", redundant));
  }
  if (wall >= 60.0) {
    o.fail(fmt::format("{:.1f} s wall clock", wall));
  }
  if (o.pass) {
    o.detail = fmt::format("2>1 {:.1f} Kbps, worst deviation {:.2f} pp, redundant max {:.2f}%, "
                           "{:.2f} s wall",
                           kbps, worst, redundant, wall);
  }
  return o;
}

Outcome
fairness()
{
  Outcome o;
  Scenario s = builtin("scenario3");
  MetricsReport r = run(s);
  auto [a, b] = fairnessRatio(r, 1, 2, s.duration / 2, s.duration);
  for (double share : {a, b}) {
    if (share < 45.0 || share > 55.0) {
      o.fail(fmt::format("shares {:.2f}:{:.2f}", a, b));
    }
  }
  if (o.pass) {
    o.detail = fmt::format("shares {:.2f}:{:.2f}", a, b);
  }
  return o;
}

Outcome
cacheTracking()
{
  Outcome o;
  Scenario s = builtin("scenario4");
  MetricsReport r = run(s);
  Time exhausted = -1;
  for (const auto& row : r.routers) {
    if (row.node == 3) {
      exhausted = row.counters.lastCsHit;
    }
  }
  if (exhausted < 0) {
    o.fail("router 3 never served from cache");
    return o;
  }
  // consumer 1 starts at 20 s; skip its slow start
  double cached = r.goodputBps(1, fromSeconds(22), exhausted) / 1e6;
  Time settled = exhausted + fromSeconds(5);
  double after = r.goodputBps(1, settled, s.duration) / 1e6;
  if (cached < 1.7) {
    o.fail(fmt::format("cached plateau {:.3f} Mbps", cached));
  }
  if (after < 0.85 || after > 1.05) {
    o.fail(fmt::format("uncached plateau {:.3f} Mbps", after));
  }
  // the transition is complete once every later 5 s window sits inside the band
  for (Time t = settled; t + fromSeconds(5) <= s.duration; t += fromSeconds(5)) {
    double g = r.goodputBps(1, t, t + fromSeconds(5)) / 1e6;
    if (g < 0.85 || g > 1.05) {
      o.fail(fmt::format("{:.3f} Mbps in [{:.1f}s, {:.1f}s)", g, toSeconds(t), toSeconds(t) + 5));
    }
  }
  if (o.pass) {
    o.detail = fmt::format("{:.3f} Mbps cached until {:.2f} s, {:.3f} Mbps from {:.2f} s", cached,
                           toSeconds(exhausted), after, toSeconds(settled));
  }
  return o;
}

Outcome
cutFraction()
{
  Outcome o;
  std::vector<std::string> parts;
  for (const char* name :
       {"scenario1-case1", "scenario1-case2", "scenario2-case1", "scenario2-case2"}) {
    Scenario s = builtin(name);
    MetricsReport r = run(s);
    double sum = 0.0;
    for (const auto& d : s.cut) {
      sum += r.throughputBps(d);
    }
    double bound = maxFlowBps(s, s.consumers.at(0).node);
    double f = sum / bound;
    parts.push_back(fmt::format("{} {:.4f}", name, f));
    if (f < 0.95) {
      o.fail(parts.back());
    }
  }
  if (o.pass) {
    for (const auto& p : parts) {
      o.detail += (o.detail.empty() ? "" : ", ") + p;
    }
  }
  return o;
}

Outcome
fabOracle()
{
  Outcome o;
  std::mt19937_64 rng(2024);
  std::size_t queries = 0;
  for (std::size_t capacity : {1u, 16u, 1024u}) {
    Fib fib;
    Fab fab(capacity);
    for (int i = 0; i < 60; ++i) {
      fib.insert(oracle::randomName(rng, 0, 4), {static_cast<FaceId>(1 + rng() % 4)});
    }
    for (int q = 0; q < 100000; ++q) {
      if (rng() % 200 == 0) {
        Name p = oracle::randomName(rng, 0, 4);
        if (rng() % 2) {
          fib.erase(p);
        }
        else {
          fib.insert(p, {static_cast<FaceId>(1 + rng() % 4)});
        }
      }
      Name n = oracle::randomName(rng, 1, 6);
      const FibEntry* got = resolve(fib, fab, n);
      ++queries;
      auto lpm = fib.longestPrefixMatch(n);
      const FibEntry* want = lpm ? fib.get(*lpm) : nullptr;
      if (got != want || got != oracle::lpmLinear(fib, n)) {
        o.fail(fmt::format("capacity {} query {}", capacity, n.toUri()));
        return o;
      }
    }
    fab.checkInvariants();
  }
  o.detail = fmt::format("{} queries", queries);
  return o;
}

Outcome
singlePathTrace()
{
  Outcome o;
  Scenario s = parseScenario(R"(
scenario name=single-path duration=60 seed=11
node id=1 kind=consumer
node id=2 kind=router
node id=3 kind=producer
link a=1 b=2 bandwidth_mbps=10 latency_ms=5
link a=2 b=3 bandwidth_mbps=1 latency_ms=20 queue_pkts=16
route node=2 prefix=/s via=3
catalog node=3 prefix=/s
consumer node=1 prefix=/s/obj paths=1
)");
  validateScenario(s);
  Network net(s);
  std::size_t increases = 0;
  std::size_t decreases = 0;
  double cwndMin = s.consumers[0].config.window.cwndMin;
  Consumer::Events ev;
  ev.window = [&](Time, std::uint32_t, const WindowEvent& e) {
    if (e.kind == WindowEvent::Kind::Increase && e.phase == Phase::CongestionAvoidance) {
      ++increases;
      double want = 1.0 / e.before;
      if (std::abs((e.after - e.before) - want) > 1e-12) {
        o.fail(fmt::format("increment {} at cwnd {}", e.after - e.before, e.before));
      }
    }
    else if (e.kind == WindowEvent::Kind::Decrease) {
      ++decreases;
      if (e.after != std::max(cwndMin, 0.75 * e.before)) {
        o.fail(fmt::format("decrease {} -> {}", e.before, e.after));
      }
    }
  };
  net.consumer(1)->setEvents(ev);
  net.run();
  if (increases == 0 || decreases == 0) {
    o.fail(fmt::format("trace too thin: {} increases, {} decreases", increases, decreases));
  }
  if (o.pass) {
    o.detail = fmt::format("{} increments, {} decreases", increases, decreases);
  }
  return o;
}

Outcome
alphaOracle()
{
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> cw(1.0, 200.0);
  std::uniform_real_distribution<double> rt(0.001, 2.0);
  double worst = 0.0;
  for (int v = 0; v < 1000; ++v) {
    std::size_t n = 2 + rng() % 9;
    std::vector<PathSample> paths(n);
    std::vector<double> c(n);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = cw(rng);
      t[i] = rt(rng);
      paths[i] = {c[i], t[i]};
    }
    double want = oracle::alphaDirect(c, t);
    double got = linkedIncreaseAlpha(paths);
    double rel = std::abs(got - want) / want;
    worst = std::max(worst, rel);
    if (rel > 1e-9) {
      o.fail(fmt::format("vector {}: alpha {} vs {}", v, got, want));
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (coupledIncrease(paths, p) > 1.0 / c[p]) {
        o.fail(fmt::format("vector {} path {}: increment above 1/cwnd", v, p));
      }
    }
  }
  if (o.pass) {
    o.detail = fmt::format("worst relative error {:.3g}", worst);
  }
  return o;
}

struct Hop
{
  NodeId node;
  FaceId in;
  FaceId out;

  bool
  operator==(const Hop&) const = default;
};

/// Random loop-free topology: routes only point to higher node ids, the producer is last.
std::string
randomTopology(std::mt19937_64& rng, int index)
{
  int n = 3 + static_cast<int>(rng() % 10);
  std::set<std::pair<int, int>> edges;
  edges.insert({1, 2});
  for (int i = 2; i < n; ++i) {
    edges.insert({i, i + 1 + static_cast<int>(rng() % (n - i))});
  }
  int extra = static_cast<int>(rng() % (2 * n));
  for (int k = 0; k < extra; ++k) {
    int a = 2 + static_cast<int>(rng() % (n - 1));
    int b = 2 + static_cast<int>(rng() % (n - 1));
    if (a != b) {
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  std::ostringstream out;
  out << "scenario name=retrace-" << index << " duration=60 seed=" << index + 1 << "\n";
  out << "node id=1 kind=consumer\n";
  if (n > 2) {
    out << "node id=2";
    for (int i = 3; i < n; ++i) {
      out << "," << i;
    }
    out << " kind=router\n";
  }
  out << "node id=" << n << " kind=producer\n";
  for (auto [a, b] : edges) {
    out << "link a=" << a << " b=" << b << " bandwidth_mbps=10 latency_ms=" << 1 + rng() % 9
        << "\n";
  }
  for (int i = 2; i < n; ++i) {
    out << "route node=" << i << " prefix=/t via=";
    bool first = true;
    for (auto [a, b] : edges) {
      if (a == i) {
        out << (first ? "" : ",") << b;
        first = false;
      }
    }
    out << "\n";
  }
  out << "catalog node=" << n << " prefix=/t\n";
  return out.str();
}

Outcome
tagRetrace()
{
  Outcome o;
  std::mt19937_64 rng(31);
  std::size_t probes = 0;
  for (int topo = 0; topo < 50 && o.pass; ++topo) {
    std::string text = randomTopology(rng, topo);
    Scenario s = parseScenario(text);
    validateScenario(s);
    Network net(s);
    std::map<std::string, std::vector<Hop>> interestHops;
    std::map<std::string, std::vector<Hop>> dataHops;
    net.setForwardObserver([&](const ForwardRecord& r) {
      auto& log = r.kind == ForwardRecord::Kind::Interest ? interestHops : dataHops;
      log[r.name.toUri()].push_back({r.node, r.inFace, r.outFace});
    });
    std::map<std::string, std::optional<Tag>> arrived;
    net.setDeliveryObserver([&](NodeId node, FaceId, const Packet& p) {
      if (auto* d = std::get_if<Data>(&p); d != nullptr && node == 1) {
        arrived[d->name.toUri()] = d->tag;
      }
    });

    FaceId out = net.faceTowards(1, 2);
    Time t = 0;
    for (int k = 0; k < 8 && o.pass; ++k) {
      Name probe = Name::parse("/t/obj").appendSequence(static_cast<std::uint64_t>(k));
      Name replay = Name::parse("/t/obj").appendSequence(static_cast<std::uint64_t>(1000 + k));
      net.send(1, out, Interest{probe, Tag{}, true});
      t += fromSeconds(1);
      net.scheduler().runUntil(t);
      auto got = arrived.find(probe.toUri());
      if (got == arrived.end() || !got->second) {
        o.fail(fmt::format("topology {} probe {}: no tagged Data", topo, k));
        break;
      }
      net.send(1, out, Interest{replay, *got->second});
      t += fromSeconds(1);
      net.scheduler().runUntil(t);
      ++probes;

      const auto& probeFwd = interestHops[probe.toUri()];
      const auto& probeBack = dataHops[probe.toUri()];
      const auto& replayFwd = interestHops[replay.toUri()];
      if (probeFwd.empty() || probeFwd.size() != probeBack.size()) {
        o.fail(fmt::format("topology {} probe {}: incomplete probe log", topo, k));
        break;
      }
      // the probe Data walks the Interest's hops backwards
      for (std::size_t h = 0; h < probeFwd.size(); ++h) {
        const Hop& f = probeFwd[probeFwd.size() - 1 - h];
        if (!(probeBack[h] == Hop{f.node, f.out, f.in})) {
          o.fail(fmt::format("topology {} probe {}: Data hop {} off the reverse path", topo, k, h));
        }
      }
      // replaying the collected tag repeats the probe's hops exactly
      if (replayFwd != probeFwd) {
        o.fail(fmt::format("topology {} probe {}: replay took {} hops, probe {}", topo, k,
                           replayFwd.size(), probeFwd.size()));
      }
      if (!arrived.contains(replay.toUri())) {
        o.fail(fmt::format("topology {} probe {}: replay not answered", topo, k));
      }
    }
    for (NodeId id = 2; id < static_cast<NodeId>(s.nodes.size()); ++id) {
      if (net.router(id)->counters().pathFailures != 0) {
        o.fail(fmt::format("topology {}: router {} saw a path failure", topo, id));
      }
    }
  }
  if (o.pass) {
    o.detail = fmt::format("{} probes over 50 topologies", probes);
  }
  return o;
}

Outcome
stateMachine()
{
  Outcome o;
  std::size_t total = 0;
  for (const auto& [name, r] : g_reports) {
    for (const auto& t : r.transitions) {
      ++total;
      if (!isAllowedTransition(t.transition)) {
        o.fail(fmt::format("{}: {} -> {}", name, toString(t.transition.from),
                           toString(t.transition.to)));
      }
    }
  }
  if (total == 0) {
    o.fail("no transitions recorded");
  }
  if (o.pass) {
    o.detail = fmt::format("{} transitions over {} runs", total, g_reports.size());
  }
  return o;
}

std::string
slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Outcome
determinism()
{
  Outcome o;
  auto base = std::filesystem::temp_directory_path() / "ptp-acceptance";
  std::filesystem::remove_all(base);
  std::size_t files = 0;
  for (const auto& name : builtinScenarioNames()) {
    Scenario s = builtin(name);
    for (int i = 0; i < 2; ++i) {
      MetricsReport r = run(s);
      writeOutputs(base / name / std::to_string(i), s, r, evaluateExpectations(s, r));
    }
    for (const auto& entry : std::filesystem::directory_iterator(base / name / "0")) {
      if (entry.path().extension() != ".csv") {
        continue;
      }
      ++files;
      auto other = base / name / "1" / entry.path().filename();
      if (slurp(entry.path()) != slurp(other)) {
        o.fail(fmt::format("{} {}", name, entry.path().filename().string()));
      }
    }
  }
  std::filesystem::remove_all(base);
  if (o.pass) {
    o.detail = fmt::format("{} CSV pairs identical", files);
  }
  return o;
}

} // namespace

int
main()
{
  report("AC1", "hierarchical mesh throughput and per-link utilization", meshReproduction());
  report("AC2", "shared-bottleneck fairness over the final half", fairness());
  report("AC3", "cache tracking plateaus", cacheTracking());
  report("AC4", "tree and diamond cut throughput vs max-flow", cutFraction());
  report("AC5", "FAB resolve equals longest prefix match", fabOracle());
  report("AC6", "single-path AIMD trace", singlePathTrace());
  report("AC7", "alpha against direct oracle, increment bound", alphaOracle());
  report("AC8", "probe tags retrace the probe path", tagRetrace());
  // the determinism runs feed the state-machine check as well
  Outcome det = determinism();
  report("AC9", "phase transitions stay on allowed edges", stateMachine());
  report("AC10", "identical seeds give identical CSVs", det);
  return g_failures == 0 ? 0 : 1;
}
