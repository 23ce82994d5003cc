#include "ptp/linked-increase.hpp"

#include <algorithm>
#include <stdexcept>

namespace ptp {

double
linkedIncreaseAlpha(std::span<const PathSample> paths)
{
  if (paths.empty()) {
    throw std::invalid_argument("alpha needs at least one path");
  }
  double total = 0.0;
  double best = 0.0;
  double rate = 0.0;
  for (const auto& s : paths) {
    if (!(s.cwnd > 0.0) || !(s.rtt > 0.0)) {
      throw std::invalid_argument("cwnd and rtt must be positive");
    }
    total += s.cwnd;
    best = std::max(best, s.cwnd / (s.rtt * s.rtt));
    rate += s.cwnd / s.rtt;
  }
  return total * best / (rate * rate);
}

double
coupledIncrease(std::span<const PathSample> paths, std::size_t p)
{
  double total = 0.0;
  for (const auto& s : paths) {
    total += s.cwnd;
  }
  double alpha = linkedIncreaseAlpha(paths);
  return std::min(alpha / total, 1.0 / paths[p].cwnd);
}

double
increaseStep(std::span<const PathSample> paths, std::size_t p, double referenceRtt,
             RttScaling scaling)
{
  if (!(referenceRtt > 0.0)) {
    throw std::invalid_argument("reference RTT must be positive");
  }
  double ratio = scaling == RttScaling::PathOverReference ? paths[p].rtt / referenceRtt
                                                          : referenceRtt / paths[p].rtt;
  return ratio * coupledIncrease(paths, p);
}

double
multiplicativeDecrease(double cwnd, double beta, double cwndMin)
{
  return std::max(cwndMin, beta * cwnd);
}

} // namespace ptp
