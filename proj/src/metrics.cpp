#include "ptp/metrics.hpp"

#include <algorithm>

namespace ptp {

double
sumWindow(const std::vector<double>& series, Time bucket, Time t0, Time t1)
{
  double total = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    Time b0 = static_cast<Time>(i) * bucket;
    Time b1 = b0 + bucket;
    Time lo = std::max(b0, t0);
    Time hi = std::min(b1, t1);
    if (hi > lo) {
      total += series[i] * static_cast<double>(hi - lo) / static_cast<double>(bucket);
    }
  }
  return total;
}

std::size_t
MetricsReport::bucketCount() const
{
  return static_cast<std::size_t>((duration + bucket - 1) / bucket);
}

const LinkSeries&
MetricsReport::link(DirectedLink dir) const
{
  for (const auto& l : links) {
    if (l.dir == dir) {
      return l;
    }
  }
  throw std::out_of_range("no link " + std::to_string(dir.from) + ">" + std::to_string(dir.to));
}

const FlowSeries&
MetricsReport::flow(NodeId consumer) const
{
  for (const auto& f : flows) {
    if (f.consumer == consumer) {
      return f;
    }
  }
  throw std::out_of_range("no consumer at node " + std::to_string(consumer));
}

double
MetricsReport::throughputBps(DirectedLink dir, Time t0, Time t1) const
{
  return sumWindow(link(dir).dataBits, bucket, t0, t1) / toSeconds(t1 - t0);
}

double
MetricsReport::utilization(DirectedLink dir) const
{
  const auto& l = link(dir);
  if (l.bandwidthBps <= 0) {
    return 0.0;
  }
  return 100.0 * throughputBps(dir) / l.bandwidthBps;
}

double
MetricsReport::goodputBps(NodeId consumer, Time t0, Time t1) const
{
  return sumWindow(flow(consumer).goodputBits, bucket, t0, t1) / toSeconds(t1 - t0);
}

double
MetricsReport::pathGoodputSumBps(NodeId consumer, Time t0, Time t1) const
{
  double total = 0.0;
  for (const auto& [id, series] : flow(consumer).pathBits) {
    total += sumWindow(series, bucket, t0, t1);
  }
  return total / toSeconds(t1 - t0);
}

std::pair<double, double>
fairnessRatio(const MetricsReport& report, NodeId a, NodeId b, Time t0, Time t1)
{
  double ga = report.goodputBps(a, t0, t1);
  double gb = report.goodputBps(b, t0, t1);
  if (ga + gb <= 0.0) {
    throw std::domain_error("fairness ratio undefined: no traffic delivered");
  }
  return {100.0 * ga / (ga + gb), 100.0 * gb / (ga + gb)};
}

} // namespace ptp
