#include "ptp/producer.hpp"

namespace ptp {

void
Producer::addCatalog(CatalogEntry entry)
{
  m_catalog.push_back(std::move(entry));
}

void
Producer::receive(FaceId face, Packet pkt)
{
  auto* interest = std::get_if<Interest>(&pkt);
  if (interest == nullptr) {
    return;
  }
  for (const auto& entry : m_catalog) {
    if (!entry.prefix.isPrefixOf(interest->name) || interest->name.size() <= entry.prefix.size()) {
      continue;
    }
    std::uint64_t seq = 0;
    try {
      seq = sequenceOf(interest->name);
    }
    catch (const Name::Error&) {
      break;
    }
    if (entry.packets > 0 && seq >= entry.packets) {
      break;
    }
    Data data{interest->name, std::nullopt, false, entry.payloadSize};
    if (interest->probe) {
      data.tag = Tag{};
    }
    ++m_served;
    m_send(face, std::move(data));
    return;
  }
  ++m_rejected;
  m_send(face, Nack{interest->name, NackReason::NoRoute});
}

} // namespace ptp
