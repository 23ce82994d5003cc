#ifndef PTP_LINKED_INCREASE_HPP
#define PTP_LINKED_INCREASE_HPP

#include <span>

namespace ptp {

/// Window and smoothed RTT (seconds) of one in-use path.
struct PathSample
{
  double cwnd = 1.0;
  double rtt = 0.1;
};

/// Which way the RTT ratio multiplies the coupled increase.
enum class RttScaling {
  /// rtt_p / rtt_ref, the form used in the increase formula
  PathOverReference,
  /// rtt_ref / rtt_p, for sensitivity runs
  ReferenceOverPath,
};

/**
 * Linked Increase aggressiveness:
 *   alpha = cwnd_total * max(cwnd_i / rtt_i^2) / (sum(cwnd_i / rtt_i))^2
 */
double
linkedIncreaseAlpha(std::span<const PathSample> paths);

/// min(alpha / cwnd_total, 1 / cwnd_p): the coupled per-Data increase before RTT scaling.
double
coupledIncrease(std::span<const PathSample> paths, std::size_t p);

/// Full additive step for path \p p: RTT ratio times coupledIncrease().
double
increaseStep(std::span<const PathSample> paths, std::size_t p, double referenceRtt,
             RttScaling scaling = RttScaling::PathOverReference);

/// max(cwndMin, beta * cwnd)
double
multiplicativeDecrease(double cwnd, double beta, double cwndMin);

} // namespace ptp

#endif // PTP_LINKED_INCREASE_HPP
