#include "ptp/scheduler.hpp"

#include <algorithm>

namespace ptp {

void
Scheduler::schedule(Time at, Action action)
{
  if (at < m_now) {
    throw ConfigError("event scheduled in the past (t=" + std::to_string(toSeconds(at)) +
                      "s, now=" + std::to_string(toSeconds(m_now)) + "s)");
  }
  m_heap.push_back(Event{at, m_nextSeqno++, std::move(action)});
  std::push_heap(m_heap.begin(), m_heap.end(), Later{});
}

void
Scheduler::runUntil(Time until)
{
  while (!m_heap.empty() && m_heap.front().time <= until) {
    std::pop_heap(m_heap.begin(), m_heap.end(), Later{});
    Event ev = std::move(m_heap.back());
    m_heap.pop_back();
    m_now = ev.time;
    ++m_executed;
    ev.action();
  }
  if (!m_heap.empty()) {
    m_now = until;
  }
}

} // namespace ptp
