#include "ptp/content-store.hpp"

namespace ptp {

void
ContentStore::insert(const Data& data)
{
  if (m_capacity == 0) {
    return;
  }
  auto key = data.name.toUri();
  if (auto it = m_index.find(key); it != m_index.end()) {
    m_lru.splice(m_lru.begin(), m_lru, it->second);
    return;
  }
  if (m_index.size() == m_capacity) {
    m_index.erase(m_lru.back().name.toUri());
    m_lru.pop_back();
  }
  Data stored = data;
  stored.tag.reset();
  stored.fromIntermediate = false;
  m_lru.push_front(std::move(stored));
  m_index.emplace(std::move(key), m_lru.begin());
}

std::optional<Data>
ContentStore::find(const Name& name)
{
  auto it = m_index.find(name.toUri());
  if (it == m_index.end()) {
    return std::nullopt;
  }
  m_lru.splice(m_lru.begin(), m_lru, it->second);
  return *it->second;
}

} // namespace ptp
