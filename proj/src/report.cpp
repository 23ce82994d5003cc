#include "ptp/report.hpp"
#include "ptp/max-flow.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <map>

namespace ptp {

namespace {

double
param(const Expectation& e, const std::string& key)
{
  auto it = e.params.find(key);
  if (it == e.params.end()) {
    throw ConfigError("expect " + e.metric + ": missing parameter '" + key + "'", e.line);
  }
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) {
      throw std::invalid_argument(it->second);
    }
    return v;
  }
  catch (const std::logic_error&) {
    throw ConfigError("expect " + e.metric + ": '" + key + "' is not a number", e.line);
  }
}

NodeId
nodeParam(const Expectation& e, const std::string& key)
{
  return static_cast<NodeId>(param(e, key));
}

Time
lastCsHit(const MetricsReport& report, NodeId router, const Expectation& e)
{
  for (const auto& r : report.routers) {
    if (r.node == router) {
      if (r.counters.lastCsHit < 0) {
        throw ConfigError("expect " + e.metric + ": router " + std::to_string(router) +
                            " never served from its content store",
                          e.line);
      }
      return r.counters.lastCsHit;
    }
  }
  throw ConfigError("expect " + e.metric + ": no router " + std::to_string(router), e.line);
}

std::string
tagText(const Tag& tag)
{
  std::string out;
  for (auto f : tag.items()) {
    if (!out.empty()) {
      out += ' ';
    }
    out += std::to_string(f);
  }
  return out;
}

} // namespace

std::vector<ExpectationResult>
evaluateExpectations(const Scenario& scenario, const MetricsReport& report)
{
  std::vector<ExpectationResult> results;
  for (const auto& e : scenario.expectations) {
    Time t0 = e.params.count("t0") ? fromSeconds(param(e, "t0")) : report.windowStart;
    Time t1 = e.params.count("t1") ? fromSeconds(param(e, "t1")) : report.duration;
    if (t1 <= t0) {
      throw ConfigError("expect " + e.metric + ": empty time window", e.line);
    }
    ExpectationResult r{e, 0.0, false, e.metric};
    if (e.metric == "utilization" || e.metric == "throughput_kbps") {
      DirectedLink d{nodeParam(e, "from"), nodeParam(e, "to")};
      double bps = report.throughputBps(d, t0, t1);
      const auto& link = report.link(d);
      r.value = e.metric == "throughput_kbps" ? bps / 1e3
                                               : (link.bandwidthBps > 0 ? 100.0 * bps / link.bandwidthBps : 0.0);
      r.label = fmt::format("{} {}>{}", e.metric, d.from, d.to);
    }
    else if (e.metric == "goodput_mbps") {
      NodeId c = nodeParam(e, "consumer");
      r.value = report.goodputBps(c, t0, t1) / 1e6;
      r.label = fmt::format("goodput_mbps consumer {}", c);
    }
    else if (e.metric == "fairness") {
      NodeId a = nodeParam(e, "consumer");
      NodeId b = nodeParam(e, "other");
      r.value = fairnessRatio(report, a, b, t0, t1).first;
      r.label = fmt::format("fairness share of {} vs {}", a, b);
    }
    else if (e.metric == "cut_fraction") {
      NodeId c = nodeParam(e, "consumer");
      if (scenario.cut.empty()) {
        throw ConfigError("expect cut_fraction: scenario declares no cut", e.line);
      }
      double sum = 0.0;
      for (const auto& d : scenario.cut) {
        sum += report.throughputBps(d, t0, t1);
      }
      r.value = sum / maxFlowBps(scenario, c);
      r.label = fmt::format("cut_fraction consumer {}", c);
    }
    else if (e.metric == "goodput_cached_mbps") {
      NodeId c = nodeParam(e, "consumer");
      Time from = fromSeconds(param(e, "from"));
      Time until = lastCsHit(report, nodeParam(e, "router"), e);
      r.value = until > from ? report.goodputBps(c, from, until) / 1e6 : 0.0;
      r.label = fmt::format("goodput_cached_mbps consumer {} [{:.3f}s, {:.3f}s)", c,
                            toSeconds(from), toSeconds(until));
    }
    else if (e.metric == "goodput_uncached_mbps") {
      NodeId c = nodeParam(e, "consumer");
      Time from = lastCsHit(report, nodeParam(e, "router"), e) + fromSeconds(param(e, "delay"));
      Time to = fromSeconds(param(e, "to"));
      r.value = to > from ? report.goodputBps(c, from, to) / 1e6 : 0.0;
      r.label = fmt::format("goodput_uncached_mbps consumer {} [{:.3f}s, {:.3f}s)", c,
                            toSeconds(from), toSeconds(to));
    }
    else if (e.metric == "illegal_transitions") {
      double bad = 0;
      for (const auto& t : report.transitions) {
        if (!isAllowedTransition(t.transition)) {
          ++bad;
        }
      }
      r.value = bad;
    }
    else {
      throw ConfigError("unknown expect metric '" + e.metric + "'", e.line);
    }
    r.pass = (!e.min || r.value >= *e.min) && (!e.max || r.value <= *e.max);
    results.push_back(std::move(r));
  }
  return results;
}

std::string
formatSummary(const Scenario& scenario, const MetricsReport& report,
              const std::vector<ExpectationResult>& results)
{
  std::string out;
  auto line = [&out](const std::string& s) {
    out += s;
    out += '\n';
  };
  line(fmt::format("scenario {}  seed {}  duration {:.1f}s  window [{:.1f}s, {:.1f}s)",
                   report.scenario, report.seed, toSeconds(report.duration),
                   toSeconds(report.windowStart), toSeconds(report.duration)));
  if (!scenario.description.empty()) {
    line(scenario.description);
  }
  line(fmt::format("events executed: {}", report.events));
  line("");
  line("links (Data direction)        capacity_kbps  throughput_kbps  utilization_%  drops");
  for (const auto& l : report.links) {
    std::uint64_t drops = 0;
    for (auto d : l.drops) {
      drops += d;
    }
    line(fmt::format("  {:>4} > {:<4}               {:>13.1f}  {:>15.1f}  {:>13.2f}  {:>5}",
                     l.dir.from, l.dir.to, l.bandwidthBps / 1e3,
                     report.throughputBps(l.dir) / 1e3, report.utilization(l.dir), drops));
  }
  line("");
  for (const auto& f : report.flows) {
    line(fmt::format("consumer {} {}: goodput {:.1f} kbps, received {}{}", f.consumer, f.flow,
                     report.goodputBps(f.consumer) / 1e3, f.received,
                     f.complete ? " (complete)" : ""));
    const auto& c = f.counters;
    line(fmt::format("  interests {} retx {} probes {} data {} cache {} dup {} losses {} timeouts {} "
                     "nacks {} switches {}",
                     c.interestsSent, c.retransmissions, c.probesSent, c.dataReceived, c.cacheData,
                     c.duplicateData, c.lossesDetected, c.timeouts, c.nacks, c.pathSwitches));
    if (!scenario.cut.empty()) {
      double sum = 0.0;
      for (const auto& d : scenario.cut) {
        sum += report.throughputBps(d);
      }
      double bound = maxFlowBps(scenario, f.consumer);
      line(fmt::format("  max-flow bound {:.1f} kbps, cut throughput {:.1f} kbps ({:.2f}%)",
                       bound / 1e3, sum / 1e3, 100.0 * sum / bound));
    }
  }
  line("");
  line("routers: node fab_hits fab_misses fab_evictions cs_hits last_cs_hit_s");
  for (const auto& r : report.routers) {
    line(fmt::format("  {} {} {} {} {} {:.3f}", r.node, r.fab.hits, r.fab.misses,
                     r.fab.evictions, r.counters.csHits,
                     r.counters.lastCsHit < 0 ? -1.0 : toSeconds(r.counters.lastCsHit)));
  }
  std::size_t illegal = 0;
  for (const auto& t : report.transitions) {
    if (!isAllowedTransition(t.transition)) {
      ++illegal;
    }
  }
  line(fmt::format("phase transitions: {} ({} outside the state machine)",
                   report.transitions.size(), illegal));
  if (!results.empty()) {
    line("");
    line("expectations:");
    for (const auto& r : results) {
      std::string bounds;
      if (r.expectation.min) {
        bounds += fmt::format(" min {}", *r.expectation.min);
      }
      if (r.expectation.max) {
        bounds += fmt::format(" max {}", *r.expectation.max);
      }
      line(fmt::format("  [{}] {} = {:.4f}{}", r.pass ? "PASS" : "FAIL", r.label, r.value,
                       bounds));
    }
  }
  return out;
}

void
writeOutputs(const std::filesystem::path& dir, const Scenario& scenario,
             const MetricsReport& report, const std::vector<ExpectationResult>& results)
{
  std::filesystem::create_directories(dir);
  auto open = [&dir](const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) {
      throw std::runtime_error("cannot write " + (dir / name).string());
    }
    return f;
  };
  double bucketSeconds = toSeconds(report.bucket);
  auto bucketEnd = [&](std::size_t i) { return toSeconds(static_cast<Time>(i + 1) * report.bucket); };

  {
    auto f = open("report.txt");
    f << formatSummary(scenario, report, results);
  }
  {
    auto f = open("links.csv");
    f << "t,link,dir,bits,data_bits,drops\n";
    for (std::size_t i = 0; i < report.bucketCount(); ++i) {
      for (const auto& l : report.links) {
        NodeId a = std::min(l.dir.from, l.dir.to);
        NodeId b = std::max(l.dir.from, l.dir.to);
        f << fmt::format("{:.3f},{}-{},{}>{},{:.1f},{:.1f},{}\n", bucketEnd(i), a, b, l.dir.from,
                         l.dir.to, l.bits[i], l.dataBits[i], l.drops[i]);
      }
    }
  }

  std::map<std::pair<Time, NodeId>, std::vector<const PathRow*>> rowsAt;
  for (const auto& r : report.paths) {
    rowsAt[{r.t, r.consumer}].push_back(&r);
  }
  auto pathGoodput = [&](const FlowSeries& fl, std::int32_t id, Time t) {
    auto it = fl.pathBits.find(id);
    if (it == fl.pathBits.end()) {
      return 0.0;
    }
    auto b = static_cast<std::size_t>(t / report.bucket);
    return b >= 1 && b - 1 < it->second.size() ? it->second[b - 1] / bucketSeconds : 0.0;
  };
  {
    auto f = open("flows.csv");
    f << "t,consumer,flow,goodput_bps,paths_in_use,cwnd_total,cwnd_per_path\n";
    for (std::size_t i = 0; i < report.bucketCount(); ++i) {
      Time t = static_cast<Time>(i + 1) * report.bucket;
      for (const auto& fl : report.flows) {
        std::size_t inUse = 0;
        double total = 0.0;
        std::string per;
        auto it = rowsAt.find({t, fl.consumer});
        if (it != rowsAt.end()) {
          for (const auto* r : it->second) {
            if (r->path.status != PathStatus::InUse) {
              continue;
            }
            ++inUse;
            total += r->path.cwnd;
            per += fmt::format("{}{}:{:.4f}", per.empty() ? "" : ";", r->path.id, r->path.cwnd);
          }
        }
        f << fmt::format("{:.3f},{},{},{:.1f},{},{:.4f},{}\n", toSeconds(t), fl.consumer, fl.flow,
                         fl.goodputBits[i] / bucketSeconds, inUse, total, per);
      }
    }
  }
  {
    auto f = open("paths.csv");
    f << "t,consumer,path,status,tag,cwnd,phase,srtt_ms,rto_ms,inflight,goodput_bps\n";
    for (const auto& [key, rows] : rowsAt) {
      const auto& fl = report.flow(key.second);
      for (const auto* r : rows) {
        const auto& p = r->path;
        f << fmt::format("{:.3f},{},{},{},{},{:.4f},{},{:.3f},{:.3f},{},{:.1f}\n", toSeconds(r->t),
                         r->consumer, p.id, toString(p.status), tagText(p.tag), p.cwnd,
                         p.status == PathStatus::InUse ? toString(p.phase) : "-", p.srtt * 1e3,
                         p.rto * 1e3, p.inflight,
                         pathGoodput(fl, static_cast<std::int32_t>(p.id), r->t));
      }
      f << fmt::format("{:.3f},{},probe,-,,0,-,0,0,0,{:.1f}\n", toSeconds(key.first), key.second,
                       pathGoodput(fl, PROBE_PATH, key.first));
    }
  }
  {
    auto f = open("transitions.csv");
    f << "t,consumer,path,from,to,cause\n";
    for (const auto& t : report.transitions) {
      f << fmt::format("{:.9f},{},{},{},{},{}\n", toSeconds(t.t), t.consumer, t.path,
                       toString(t.transition.from), toString(t.transition.to),
                       toString(t.transition.cause));
    }
  }
  {
    auto f = open("selections.csv");
    f << "t,consumer,path,status,tag,bandwidth_bps,srtt_ms\n";
    for (const auto& r : report.selections) {
      f << fmt::format("{:.3f},{},{},{},{},{:.1f},{:.3f}\n", toSeconds(r.t), r.consumer, r.path.id,
                       toString(r.path.status), tagText(r.path.tag), r.path.measuredBandwidth,
                       r.path.srtt * 1e3);
    }
  }
  {
    auto f = open("routers.csv");
    f << "node,interests_in,interests_out,data_in,data_out,nacks_in,nacks_out,cs_hits,aggregated,"
         "path_failures,hop_limit_drops,unsolicited_data,fab_hits,fab_misses,fab_insertions,"
         "fab_evictions,fab_invalidations,cs_size,last_cs_hit_s\n";
    for (const auto& r : report.routers) {
      const auto& c = r.counters;
      f << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.6f}\n", r.node,
                       c.interestsIn, c.interestsOut, c.dataIn, c.dataOut, c.nacksIn, c.nacksOut,
                       c.csHits, c.aggregated, c.pathFailures, c.hopLimitDrops, c.unsolicitedData,
                       r.fab.hits, r.fab.misses, r.fab.insertions, r.fab.evictions,
                       r.fab.invalidations, r.csSize,
                       c.lastCsHit < 0 ? -1.0 : toSeconds(c.lastCsHit));
    }
  }
}

} // namespace ptp
