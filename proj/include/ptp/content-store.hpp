#ifndef PTP_CONTENT_STORE_HPP
#define PTP_CONTENT_STORE_HPP

#include "ptp/packet.hpp"

#include <list>
#include <optional>
#include <string>
#include <unordered_map>

namespace ptp {

/// Packet cache with least-recently-used eviction.
class ContentStore
{
public:
  explicit
  ContentStore(std::size_t capacity)
    : m_capacity(capacity)
  {
  }

  /// Stores a copy of \p data (without tag or intermediate flag). No-op at capacity 0.
  void
  insert(const Data& data);

  /// Cached packet for \p name, refreshed as most recently used.
  std::optional<Data>
  find(const Name& name);

  bool
  contains(const Name& name) const
  {
    return m_index.count(name.toUri()) > 0;
  }

  std::size_t
  size() const noexcept
  {
    return m_index.size();
  }

  std::size_t
  capacity() const noexcept
  {
    return m_capacity;
  }

private:
  std::size_t m_capacity;
  std::list<Data> m_lru;
  std::unordered_map<std::string, std::list<Data>::iterator> m_index;
};

} // namespace ptp

#endif // PTP_CONTENT_STORE_HPP
