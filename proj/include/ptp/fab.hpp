#ifndef PTP_FAB_HPP
#define PTP_FAB_HPP

#include "ptp/fib.hpp"
#include "ptp/name.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ptp {

/**
 * \brief Forwarding Acceleration Base: exact-match cache from flow name to FIB entry.
 *
 * A chained hash table whose tuples are interlinked with a doubly linked recency list.
 * Inserting puts a tuple at the list head; a lookup hit moves it back to the head; when
 * the table is full the list tail and its hash tuple are evicted together.
 *
 * Tuples keep the flow name as the key. A flow name is usually longer than the matched
 * FIB prefix, so comparing against the prefix alone could not tell flows apart.
 */
class Fab
{
public:
  struct Stats
  {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t insertions = 0;
    std::uint64_t evictions = 0;
    /// Tuples dropped because their FIB entry was modified or erased.
    std::uint64_t invalidations = 0;
  };

  static constexpr std::size_t DEFAULT_CAPACITY = 1024;

  explicit
  Fab(std::size_t capacity = DEFAULT_CAPACITY);

  /**
   * On a hit, returns the handle and moves the tuple to the list head. A tuple whose
   * handle is stale in \p fib, or that predates a prefix insertion, is removed and
   * reported as a miss.
   */
  std::optional<Fib::Handle>
  lookup(const FlowName& flow, const Fib& fib);

  /**
   * Inserts at the list head and returns the evicted flow, if the insertion overflowed.
   * Inserting a flow that is already present replaces its handle and touches it.
   */
  std::optional<FlowName>
  insert(const FlowName& flow, Fib::Handle entry, const Fib& fib);

  bool
  erase(const FlowName& flow);

  bool
  contains(const FlowName& flow) const;

  std::size_t
  size() const noexcept
  {
    return m_size;
  }

  std::size_t
  capacity() const noexcept
  {
    return m_capacity;
  }

  const Stats&
  stats() const noexcept
  {
    return m_stats;
  }

  /// Flow names from most to least recently used.
  std::vector<FlowName>
  recencyOrder() const;

  /// Verifies hash/list consistency; throws std::logic_error describing the first violation.
  void
  checkInvariants() const;

private:
  static constexpr std::int32_t NIL = -1;

  struct Tuple
  {
    FlowName key;
    std::uint64_t hash = 0;
    Fib::Handle entry;
    std::uint64_t fibEpoch = 0;
    std::int32_t chainNext = NIL;
    std::int32_t prev = NIL;
    std::int32_t next = NIL;
    bool used = false;
  };

  static std::uint64_t
  hashOf(const FlowName& flow);

  std::size_t
  bucketOf(std::uint64_t hash) const noexcept
  {
    return static_cast<std::size_t>(hash) & (m_buckets.size() - 1);
  }

  std::int32_t
  find(const FlowName& flow, std::uint64_t hash) const;

  void
  unlinkList(std::int32_t idx);

  void
  pushFront(std::int32_t idx);

  void
  unlinkChain(std::int32_t idx);

  void
  release(std::int32_t idx);

private:
  std::size_t m_capacity;
  std::vector<Tuple> m_tuples;
  std::vector<std::int32_t> m_free;
  std::vector<std::int32_t> m_buckets;
  std::int32_t m_head = NIL;
  std::int32_t m_tail = NIL;
  std::size_t m_size = 0;
  Stats m_stats;
};

/**
 * FIB resolution through the FAB: a FAB hit returns its entry; otherwise longest prefix
 * match runs and, on success, the flow is cached. Always agrees with Fib::longestPrefixMatch.
 */
const FibEntry*
resolve(const Fib& fib, Fab& fab, const Name& name);

} // namespace ptp

#endif // PTP_FAB_HPP
