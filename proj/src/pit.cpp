#include "ptp/pit.hpp"

#include <algorithm>

namespace ptp {

const PitDownstream*
PitEntry::findDownstream(FaceId face) const
{
  auto it = std::find_if(downstream.begin(), downstream.end(),
                         [face] (const PitDownstream& d) { return d.face == face; });
  return it == downstream.end() ? nullptr : &*it;
}

bool
PitEntry::usesUpstream(FaceId face) const
{
  return std::find(upstream.begin(), upstream.end(), face) != upstream.end();
}

PitEntry*
Pit::find(const Name& name, Time now)
{
  auto it = m_entries.find(name.toUri());
  if (it == m_entries.end()) {
    return nullptr;
  }
  if (it->second.expiry <= now) {
    m_entries.erase(it);
    return nullptr;
  }
  return &it->second;
}

PitEntry&
Pit::insert(const Name& name, Time expiry)
{
  auto& entry = m_entries[name.toUri()];
  entry = PitEntry{};
  entry.name = name;
  entry.expiry = expiry;
  return entry;
}

void
Pit::erase(const Name& name)
{
  m_entries.erase(name.toUri());
}

std::size_t
Pit::expire(Time now)
{
  return std::erase_if(m_entries, [now] (const auto& kv) { return kv.second.expiry <= now; });
}

std::vector<Name>
Pit::entriesUsingUpstream(FaceId face, Time now) const
{
  std::vector<Name> out;
  for (const auto& [key, entry] : m_entries) {
    if (entry.expiry > now && entry.usesUpstream(face)) {
      out.push_back(entry.name);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace ptp
