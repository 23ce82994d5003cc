#ifndef PTP_CONGESTION_WINDOW_HPP
#define PTP_CONGESTION_WINDOW_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

namespace ptp {

enum class Phase : std::uint8_t {
  SlowStart,
  CongestionAvoidance,
  FastRecovery,
};

std::string_view
toString(Phase phase);

/// Why a path changed phase.
enum class TransitionCause : std::uint8_t {
  /// producer Data arrived while an earlier Interest on the path is unanswered
  LossDetected,
  /// a backup window of Data received without loss
  RecoveryComplete,
  /// cwnd reached ssthresh
  ThresholdReached,
  /// loss detected during slow start
  SlowStartLoss,
  Timeout,
};

std::string_view
toString(TransitionCause cause);

struct PhaseTransition
{
  Phase from;
  Phase to;
  TransitionCause cause;
};

/// True for the edges of the per-path state machine.
bool
isAllowedTransition(const PhaseTransition& t);

struct WindowParams
{
  double beta = 0.75;
  double cwndMin = 1.0;
  double initialCwnd = 2.0;
  double initialSsthresh = 64.0;
};

/// One change to a path window, for traces.
struct WindowEvent
{
  enum class Kind { Increase, Decrease, RestoreBackup, Timeout };

  Kind kind;
  Phase phase;
  double before;
  double after;
};

/**
 * \brief Per-path window and three-phase state machine.
 *
 * Slow start grows by one per producer Data and by the coupled increment per cached Data.
 * Congestion avoidance and fast recovery grow by the coupled increment. A detected loss
 * cuts the window by beta and enters fast recovery with the reduced window as backup;
 * further loss before a backup window of Data has arrived only restores the backup.
 * A timeout halves ssthresh and restarts slow start from the minimum window.
 */
class CongestionWindow
{
public:
  using Trace = std::function<void(const WindowEvent&)>;

  explicit
  CongestionWindow(WindowParams params = {});

  /**
   * Accounts for one Data on this path. \p increment is the coupled additive step to use
   * where the phase calls for additive growth. Returns the phase change, if any.
   */
  std::optional<PhaseTransition>
  onData(bool fromProducer, bool lossDetected, double increment);

  PhaseTransition
  onTimeout();

  double
  cwnd() const noexcept
  {
    return m_cwnd;
  }

  double
  ssthresh() const noexcept
  {
    return m_ssthresh;
  }

  double
  backup() const noexcept
  {
    return m_backup;
  }

  std::uint64_t
  recoveryAcks() const noexcept
  {
    return m_recoveryAcks;
  }

  Phase
  phase() const noexcept
  {
    return m_phase;
  }

  const WindowParams&
  params() const noexcept
  {
    return m_params;
  }

  void
  setTrace(Trace trace)
  {
    m_trace = std::move(trace);
  }

private:
  void
  record(WindowEvent::Kind kind, double before);

  PhaseTransition
  decreaseAndRecover(TransitionCause cause);

private:
  WindowParams m_params;
  double m_cwnd;
  double m_ssthresh;
  double m_backup = 0.0;
  std::uint64_t m_recoveryAcks = 0;
  Phase m_phase = Phase::SlowStart;
  Trace m_trace;
};

} // namespace ptp

#endif // PTP_CONGESTION_WINDOW_HPP
