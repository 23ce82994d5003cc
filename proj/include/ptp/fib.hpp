#ifndef PTP_FIB_HPP
#define PTP_FIB_HPP

#include "ptp/common.hpp"
#include "ptp/name.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ptp {

struct FibEntry
{
  Name prefix;
  /// Next-hop faces in configuration order. Never empty.
  std::vector<FaceId> faces;
};

/**
 * \brief Name-prefix forwarding table with longest-prefix-match lookup.
 *
 * Entries live in stable slots. A FibHandle names a slot at a particular generation;
 * modifying or erasing the entry bumps the generation so outstanding handles go stale.
 */
class Fib
{
public:
  struct Handle
  {
    std::uint32_t slot = 0;
    std::uint32_t generation = 0;

    friend bool operator==(const Handle&, const Handle&) = default;
  };

  /// Inserts or replaces the entry for \p prefix. \p faces must be non-empty.
  Handle
  insert(const Name& prefix, std::vector<FaceId> faces);

  bool
  erase(const Name& prefix);

  std::optional<Handle>
  findExact(const Name& prefix) const;

  /// Entry whose prefix is the longest prefix of \p name, if any.
  std::optional<Handle>
  longestPrefixMatch(const Name& name) const;

  /// nullptr when the handle is stale.
  const FibEntry*
  get(Handle h) const noexcept;

  std::size_t
  size() const noexcept
  {
    return m_index.size();
  }

  /// Incremented whenever a new prefix appears; a cached match may no longer be the longest.
  std::uint64_t
  insertEpoch() const noexcept
  {
    return m_insertEpoch;
  }

  /// Component count of the longest live prefix (0 when empty).
  std::size_t
  maxPrefixLength() const noexcept;

  /// Live entries in slot order.
  std::vector<const FibEntry*>
  entries() const;

private:
  struct Slot
  {
    FibEntry entry;
    std::uint32_t generation = 0;
    bool live = false;
  };

  std::vector<Slot> m_slots;
  std::vector<std::uint32_t> m_freeSlots;
  std::unordered_map<std::string, std::uint32_t> m_index;
  std::vector<std::size_t> m_lengthCounts;
  std::uint64_t m_insertEpoch = 0;
};

} // namespace ptp

#endif // PTP_FIB_HPP
