#ifndef PTP_RTT_ESTIMATOR_HPP
#define PTP_RTT_ESTIMATOR_HPP

#include "ptp/common.hpp"

namespace ptp {

/**
 * Jacobson/Karels smoothed RTT with exponential RTO backoff. All values in seconds.
 *
 * rto = srtt + max(4 * rttvar, minRto). The floor bounds the deviation term rather than the
 * sum: per-packet samples under a slowly growing queue drive rttvar towards zero, and a
 * floor on the sum alone then sits just above srtt.
 */
class RttEstimator
{
public:
  struct Params
  {
    double initialRto = 1.0;
    double minRto = 0.2;
    double maxRto = 60.0;
  };

  RttEstimator()
    : RttEstimator(Params{})
  {
  }

  explicit
  RttEstimator(Params params)
    : m_params(params)
    , m_rto(params.initialRto)
  {
  }

  void
  addSample(double rtt);

  /// Doubles the RTO after a timeout; the next sample resets it.
  void
  backoff();

  bool
  hasSample() const noexcept
  {
    return m_samples > 0;
  }

  double
  srtt() const noexcept
  {
    return m_srtt;
  }

  double
  rttvar() const noexcept
  {
    return m_rttvar;
  }

  double
  rto() const noexcept
  {
    return m_rto;
  }

  std::uint64_t
  samples() const noexcept
  {
    return m_samples;
  }

private:
  Params m_params;
  double m_srtt = 0.0;
  double m_rttvar = 0.0;
  double m_rto;
  std::uint64_t m_samples = 0;
};

} // namespace ptp

#endif // PTP_RTT_ESTIMATOR_HPP
