#ifndef PTP_SCHEDULER_HPP
#define PTP_SCHEDULER_HPP

#include "ptp/common.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ptp {

/**
 * \brief Discrete-event loop. Events run in (time, schedule order); the clock only moves
 * forward through executed events.
 */
class Scheduler
{
public:
  using Action = std::function<void()>;

  Time
  now() const noexcept
  {
    return m_now;
  }

  /// Throws ConfigError if \p at lies in the past.
  void
  schedule(Time at, Action action);

  void
  scheduleAfter(Time delay, Action action)
  {
    schedule(m_now + delay, std::move(action));
  }

  /**
   * Executes every event with time <= \p until, then sets the clock to \p until.
   * Returns early (clock at the last executed event) if the queue drains first.
   */
  void
  runUntil(Time until);

  std::size_t
  pending() const noexcept
  {
    return m_heap.size();
  }

  std::uint64_t
  executed() const noexcept
  {
    return m_executed;
  }

private:
  struct Event
  {
    Time time;
    std::uint64_t seqno;
    Action action;
  };

  struct Later
  {
    bool
    operator()(const Event& a, const Event& b) const noexcept
    {
      return a.time != b.time ? a.time > b.time : a.seqno > b.seqno;
    }
  };

  std::vector<Event> m_heap;
  Time m_now = 0;
  std::uint64_t m_nextSeqno = 0;
  std::uint64_t m_executed = 0;
};

} // namespace ptp

#endif // PTP_SCHEDULER_HPP
