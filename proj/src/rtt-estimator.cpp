#include "ptp/rtt-estimator.hpp"

#include <algorithm>
#include <cmath>

namespace ptp {

void
RttEstimator::addSample(double rtt)
{
  if (m_samples == 0) {
    m_srtt = rtt;
    m_rttvar = rtt / 2.0;
  }
  else {
    m_rttvar = 0.75 * m_rttvar + 0.25 * std::abs(m_srtt - rtt);
    m_srtt = 0.875 * m_srtt + 0.125 * rtt;
  }
  ++m_samples;
  m_rto = std::min(m_srtt + std::max(4.0 * m_rttvar, m_params.minRto), m_params.maxRto);
}

void
RttEstimator::backoff()
{
  m_rto = std::min(m_rto * 2.0, m_params.maxRto);
}

} // namespace ptp
