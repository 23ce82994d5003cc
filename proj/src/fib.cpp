#include "ptp/fib.hpp"

namespace ptp {

Fib::Handle
Fib::insert(const Name& prefix, std::vector<FaceId> faces)
{
  if (faces.empty()) {
    throw std::invalid_argument("FIB entry " + prefix.toUri() + " has no next hops");
  }
  auto key = prefix.toUri();
  auto it = m_index.find(key);
  if (it != m_index.end()) {
    Slot& slot = m_slots[it->second];
    slot.entry.faces = std::move(faces);
    ++slot.generation;
    return {it->second, slot.generation};
  }

  std::uint32_t idx = 0;
  if (!m_freeSlots.empty()) {
    idx = m_freeSlots.back();
    m_freeSlots.pop_back();
  }
  else {
    idx = static_cast<std::uint32_t>(m_slots.size());
    m_slots.emplace_back();
  }
  Slot& slot = m_slots[idx];
  slot.entry = FibEntry{prefix, std::move(faces)};
  ++slot.generation;
  slot.live = true;
  m_index.emplace(std::move(key), idx);
  if (m_lengthCounts.size() <= prefix.size()) {
    m_lengthCounts.resize(prefix.size() + 1, 0);
  }
  ++m_lengthCounts[prefix.size()];
  ++m_insertEpoch;
  return {idx, slot.generation};
}

bool
Fib::erase(const Name& prefix)
{
  auto it = m_index.find(prefix.toUri());
  if (it == m_index.end()) {
    return false;
  }
  Slot& slot = m_slots[it->second];
  --m_lengthCounts[slot.entry.prefix.size()];
  slot.live = false;
  ++slot.generation;
  slot.entry = FibEntry{};
  m_freeSlots.push_back(it->second);
  m_index.erase(it);
  return true;
}

std::optional<Fib::Handle>
Fib::findExact(const Name& prefix) const
{
  auto it = m_index.find(prefix.toUri());
  if (it == m_index.end()) {
    return std::nullopt;
  }
  return Handle{it->second, m_slots[it->second].generation};
}

std::optional<Fib::Handle>
Fib::longestPrefixMatch(const Name& name) const
{
  if (m_index.empty()) {
    return std::nullopt;
  }
  // ends[i] is the length of the URI text covering the first i components
  auto uri = name.toUri();
  std::vector<std::size_t> ends;
  ends.reserve(name.size() + 1);
  ends.push_back(0);
  for (std::size_t i = 0; i < name.size(); ++i) {
    ends.push_back(ends.back() + 1 + name.at(i).size());
  }
  std::string key;
  for (std::size_t len = name.size() + 1; len-- > 0;) {
    if (len == 0) {
      key = "/";
    }
    else {
      key.assign(uri, 0, ends[len]);
    }
    auto it = m_index.find(key);
    if (it != m_index.end()) {
      return Handle{it->second, m_slots[it->second].generation};
    }
  }
  return std::nullopt;
}

const FibEntry*
Fib::get(Handle h) const noexcept
{
  if (h.slot >= m_slots.size()) {
    return nullptr;
  }
  const Slot& slot = m_slots[h.slot];
  if (!slot.live || slot.generation != h.generation) {
    return nullptr;
  }
  return &slot.entry;
}

std::size_t
Fib::maxPrefixLength() const noexcept
{
  for (std::size_t len = m_lengthCounts.size(); len-- > 0;) {
    if (m_lengthCounts[len] > 0) {
      return len;
    }
  }
  return 0;
}

std::vector<const FibEntry*>
Fib::entries() const
{
  std::vector<const FibEntry*> out;
  for (const auto& slot : m_slots) {
    if (slot.live) {
      out.push_back(&slot.entry);
    }
  }
  return out;
}

} // namespace ptp
