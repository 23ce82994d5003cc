#include "ptp/congestion-window.hpp"
#include "ptp/linked-increase.hpp"

#include <algorithm>
#include <stdexcept>

namespace ptp {

std::string_view
toString(Phase phase)
{
  switch (phase) {
    case Phase::SlowStart:
      return "SS";
    case Phase::CongestionAvoidance:
      return "CA";
    case Phase::FastRecovery:
      return "FR";
  }
  return "?";
}

std::string_view
toString(TransitionCause cause)
{
  switch (cause) {
    case TransitionCause::LossDetected:
      return "loss";
    case TransitionCause::RecoveryComplete:
      return "recovered";
    case TransitionCause::ThresholdReached:
      return "ssthresh";
    case TransitionCause::SlowStartLoss:
      return "ss-loss";
    case TransitionCause::Timeout:
      return "timeout";
  }
  return "?";
}

bool
isAllowedTransition(const PhaseTransition& t)
{
  using enum Phase;
  switch (t.cause) {
    case TransitionCause::ThresholdReached:
      return t.from == SlowStart && t.to == CongestionAvoidance;
    case TransitionCause::SlowStartLoss:
      return t.from == SlowStart && t.to == FastRecovery;
    case TransitionCause::LossDetected:
      // includes re-entering fast recovery after a full backup window
      return (t.from == CongestionAvoidance || t.from == FastRecovery) && t.to == FastRecovery;
    case TransitionCause::RecoveryComplete:
      return t.from == FastRecovery && t.to == CongestionAvoidance;
    case TransitionCause::Timeout:
      return t.to == SlowStart;
  }
  return false;
}

CongestionWindow::CongestionWindow(WindowParams params)
  : m_params(params)
  , m_cwnd(params.initialCwnd)
  , m_ssthresh(params.initialSsthresh)
{
  if (!(params.cwndMin > 0.0) || params.initialCwnd < params.cwndMin) {
    throw std::invalid_argument("window must start at or above a positive minimum");
  }
  if (!(params.beta > 0.0 && params.beta < 1.0)) {
    throw std::invalid_argument("beta must lie in (0, 1)");
  }
}

void
CongestionWindow::record(WindowEvent::Kind kind, double before)
{
  if (m_trace) {
    m_trace(WindowEvent{kind, m_phase, before, m_cwnd});
  }
}

PhaseTransition
CongestionWindow::decreaseAndRecover(TransitionCause cause)
{
  Phase from = m_phase;
  double before = m_cwnd;
  m_cwnd = multiplicativeDecrease(m_cwnd, m_params.beta, m_params.cwndMin);
  record(WindowEvent::Kind::Decrease, before);
  m_backup = m_cwnd;
  m_recoveryAcks = 0;
  m_phase = Phase::FastRecovery;
  return {from, Phase::FastRecovery, cause};
}

std::optional<PhaseTransition>
CongestionWindow::onData(bool fromProducer, bool lossDetected, double increment)
{
  if (m_phase == Phase::FastRecovery) {
    ++m_recoveryAcks;
  }

  if (lossDetected) {
    switch (m_phase) {
      case Phase::SlowStart:
        return decreaseAndRecover(TransitionCause::SlowStartLoss);
      case Phase::CongestionAvoidance:
        return decreaseAndRecover(TransitionCause::LossDetected);
      case Phase::FastRecovery:
        if (static_cast<double>(m_recoveryAcks) < m_backup) {
          double before = m_cwnd;
          m_cwnd = m_backup;
          record(WindowEvent::Kind::RestoreBackup, before);
          return std::nullopt;
        }
        return decreaseAndRecover(TransitionCause::LossDetected);
    }
  }

  double before = m_cwnd;
  if (m_phase == Phase::SlowStart && fromProducer) {
    m_cwnd += 1.0;
  }
  else {
    m_cwnd += increment;
  }
  record(WindowEvent::Kind::Increase, before);

  if (m_phase == Phase::SlowStart && m_cwnd >= m_ssthresh) {
    m_phase = Phase::CongestionAvoidance;
    return PhaseTransition{Phase::SlowStart, Phase::CongestionAvoidance,
                           TransitionCause::ThresholdReached};
  }
  if (m_phase == Phase::FastRecovery && static_cast<double>(m_recoveryAcks) >= m_backup) {
    m_phase = Phase::CongestionAvoidance;
    return PhaseTransition{Phase::FastRecovery, Phase::CongestionAvoidance,
                           TransitionCause::RecoveryComplete};
  }
  return std::nullopt;
}

PhaseTransition
CongestionWindow::onTimeout()
{
  Phase from = m_phase;
  double before = m_cwnd;
  m_ssthresh = std::max(m_params.cwndMin, m_cwnd / 2.0);
  m_cwnd = m_params.cwndMin;
  m_phase = Phase::SlowStart;
  m_recoveryAcks = 0;
  record(WindowEvent::Kind::Timeout, before);
  return {from, Phase::SlowStart, TransitionCause::Timeout};
}

} // namespace ptp
