#ifndef PTP_PIT_HPP
#define PTP_PIT_HPP

#include "ptp/common.hpp"
#include "ptp/name.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace ptp {

struct PitDownstream
{
  FaceId face = 0;
  /// This requester joined an entry that was already pending.
  bool aggregated = false;
  Time arrival = 0;
};

struct PitEntry
{
  Name name;
  std::vector<PitDownstream> downstream;
  /// Faces the Interest was forwarded on.
  std::vector<FaceId> upstream;
  Time expiry = 0;
  bool probe = false;

  const PitDownstream*
  findDownstream(FaceId face) const;

  bool
  usesUpstream(FaceId face) const;
};

/// Pending Interest Table: at most one entry per content name, expired lazily.
class Pit
{
public:
  /// Live entry for \p name at \p now; expired entries are removed and reported missing.
  PitEntry*
  find(const Name& name, Time now);

  PitEntry&
  insert(const Name& name, Time expiry);

  void
  erase(const Name& name);

  /// Removes every entry expired at \p now. Returns how many were removed.
  std::size_t
  expire(Time now);

  /// Names of live entries forwarded on \p face, sorted for deterministic processing.
  std::vector<Name>
  entriesUsingUpstream(FaceId face, Time now) const;

  std::size_t
  size() const noexcept
  {
    return m_entries.size();
  }

private:
  std::unordered_map<std::string, PitEntry> m_entries;
};

} // namespace ptp

#endif // PTP_PIT_HPP
