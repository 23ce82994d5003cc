#ifndef PTP_PACKET_HPP
#define PTP_PACKET_HPP

#include "ptp/name.hpp"
#include "ptp/tag.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace ptp {

constexpr std::uint8_t DEFAULT_HOP_BUDGET = 32;
constexpr std::uint32_t DEFAULT_PAYLOAD_SIZE = 1024;

/// Fixed header bytes charged to every packet on the wire.
constexpr std::size_t HEADER_SIZE = 60;
/// Bytes per tag stack item.
constexpr std::size_t TAG_ITEM_SIZE = 4;

struct Interest
{
  Name name;
  /// Absent: legacy name-routed Interest. Present: path-specified (empty for probes).
  std::optional<Tag> tag;
  bool probe = false;
  std::uint8_t hopBudget = DEFAULT_HOP_BUDGET;

  friend bool operator==(const Interest&, const Interest&) = default;
};

struct Data
{
  Name name;
  /// Present only on probe replies.
  std::optional<Tag> tag;
  /// Set when served by a cache or duplicated by PIT aggregation.
  bool fromIntermediate = false;
  std::uint32_t payloadSize = DEFAULT_PAYLOAD_SIZE;

  friend bool operator==(const Data&, const Data&) = default;
};

enum class NackReason : std::uint8_t {
  PathFailure = 1,
  NoRoute = 2,
};

struct Nack
{
  Name name;
  NackReason reason = NackReason::NoRoute;

  friend bool operator==(const Nack&, const Nack&) = default;
};

using Packet = std::variant<Interest, Data, Nack>;

const Name&
nameOf(const Packet& pkt);

/// Size charged against link bandwidth.
std::size_t
wireSize(const Packet& pkt);

/**
 * Binary encoding: type byte, u16 name length + canonical URI, per-type fields, then an
 * optional tag as presence byte + u16 count + big-endian u32 identifiers.
 */
std::vector<std::uint8_t>
encode(const Packet& pkt);

class DecodeError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

Packet
decode(std::span<const std::uint8_t> wire);

} // namespace ptp

#endif // PTP_PACKET_HPP
