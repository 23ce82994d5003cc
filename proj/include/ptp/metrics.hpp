#ifndef PTP_METRICS_HPP
#define PTP_METRICS_HPP

#include "ptp/consumer.hpp"
#include "ptp/forwarder.hpp"
#include "ptp/scenario.hpp"

#include <map>
#include <string>
#include <vector>

namespace ptp {

/// Time-bucketed deliveries on one link direction.
struct LinkSeries
{
  DirectedLink dir;
  double bandwidthBps = 0.0;
  /// Bits of Data packets (headers included), spread over their serialization interval.
  std::vector<double> dataBits;
  /// Bits of all packets.
  std::vector<double> bits;
  std::vector<std::uint64_t> drops;
};

struct FlowSeries
{
  NodeId consumer = 0;
  std::string flow;
  /// Payload bits delivered (first receipt only) per bucket.
  std::vector<double> goodputBits;
  /// Same, split by owning path; key PROBE_PATH collects probe replies.
  std::map<std::int32_t, std::vector<double>> pathBits;
  std::uint64_t received = 0;
  bool complete = false;
  Consumer::Counters counters;
};

struct PathRow
{
  Time t = 0;
  NodeId consumer = 0;
  PathSnapshot path;
};

struct TransitionRow
{
  Time t = 0;
  NodeId consumer = 0;
  std::uint32_t path = 0;
  PhaseTransition transition;
};

struct RouterRow
{
  NodeId node = 0;
  Router::Counters counters;
  Fab::Stats fab;
  std::size_t csSize = 0;
};

struct MetricsReport
{
  std::string scenario;
  std::uint64_t seed = 0;
  Time duration = 0;
  Time bucket = 0;
  Time windowStart = 0;
  std::vector<LinkSeries> links;
  std::vector<FlowSeries> flows;
  /// Path table sampled at each bucket boundary.
  std::vector<PathRow> paths;
  /// Path table right after each periodic path selection.
  std::vector<PathRow> selections;
  std::vector<TransitionRow> transitions;
  std::vector<RouterRow> routers;
  std::uint64_t events = 0;

  std::size_t
  bucketCount() const;

  const LinkSeries&
  link(DirectedLink dir) const;

  const FlowSeries&
  flow(NodeId consumer) const;

  /// Data throughput on one direction over [t0, t1), bits per second.
  double
  throughputBps(DirectedLink dir, Time t0, Time t1) const;

  double
  throughputBps(DirectedLink dir) const
  {
    return throughputBps(dir, windowStart, duration);
  }

  /// Data throughput over the measurement window as a percentage of link capacity.
  double
  utilization(DirectedLink dir) const;

  /// Payload goodput of one consumer over [t0, t1), bits per second.
  double
  goodputBps(NodeId consumer, Time t0, Time t1) const;

  double
  goodputBps(NodeId consumer) const
  {
    return goodputBps(consumer, windowStart, duration);
  }

  /// Sum of the per-path series of one consumer over [t0, t1), bits per second.
  double
  pathGoodputSumBps(NodeId consumer, Time t0, Time t1) const;
};

/// Shares (percent) of the two consumers' combined goodput over [t0, t1).
std::pair<double, double>
fairnessRatio(const MetricsReport& report, NodeId a, NodeId b, Time t0, Time t1);

/// Sums bucket values over [t0, t1); partial buckets are weighted by overlap.
double
sumWindow(const std::vector<double>& series, Time bucket, Time t0, Time t1);

} // namespace ptp

#endif // PTP_METRICS_HPP
