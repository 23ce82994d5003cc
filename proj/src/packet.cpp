#include "ptp/packet.hpp"

namespace ptp {

std::string
Tag::toString() const
{
  std::string out = "[";
  for (std::size_t i = 0; i < m_stack.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += std::to_string(m_stack[i]);
  }
  return out + "]";
}

namespace {

enum : std::uint8_t {
  TYPE_INTEREST = 1,
  TYPE_DATA = 2,
  TYPE_NACK = 3,
};

std::size_t
tagBytes(const std::optional<Tag>& tag)
{
  return tag ? tag->size() * TAG_ITEM_SIZE : 0;
}

class Writer
{
public:
  void
  u8(std::uint8_t v)
  {
    m_buf.push_back(v);
  }

  void
  u16(std::uint16_t v)
  {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }

  void
  u32(std::uint32_t v)
  {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }

  void
  name(const Name& n)
  {
    auto uri = n.toUri();
    if (uri.size() > 0xFFFF) {
      throw std::length_error("name too long to encode");
    }
    u16(static_cast<std::uint16_t>(uri.size()));
    m_buf.insert(m_buf.end(), uri.begin(), uri.end());
  }

  void
  tag(const std::optional<Tag>& t)
  {
    u8(t ? 1 : 0);
    if (!t) {
      return;
    }
    if (t->size() > 0xFFFF) {
      throw std::length_error("tag too long to encode");
    }
    u16(static_cast<std::uint16_t>(t->size()));
    for (FaceId f : t->items()) {
      u32(f);
    }
  }

  std::vector<std::uint8_t>
  take()
  {
    return std::move(m_buf);
  }

private:
  std::vector<std::uint8_t> m_buf;
};

class Reader
{
public:
  explicit
  Reader(std::span<const std::uint8_t> in)
    : m_in(in)
  {
  }

  std::uint8_t
  u8()
  {
    if (m_pos >= m_in.size()) {
      throw DecodeError("truncated packet");
    }
    return m_in[m_pos++];
  }

  std::uint16_t
  u16()
  {
    auto hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }

  std::uint32_t
  u32()
  {
    std::uint32_t hi = u16();
    return (hi << 16) | u16();
  }

  Name
  name()
  {
    auto len = u16();
    if (m_in.size() - m_pos < len) {
      throw DecodeError("truncated name");
    }
    std::string uri(reinterpret_cast<const char*>(m_in.data() + m_pos), len);
    m_pos += len;
    try {
      return Name::parse(uri);
    }
    catch (const Name::Error& e) {
      throw DecodeError(e.what());
    }
  }

  std::optional<Tag>
  tag()
  {
    auto present = u8();
    if (present == 0) {
      return std::nullopt;
    }
    if (present != 1) {
      throw DecodeError("bad tag presence byte");
    }
    auto count = u16();
    std::vector<FaceId> items;
    items.reserve(count);
    for (std::uint16_t i = 0; i < count; ++i) {
      items.push_back(u32());
    }
    return Tag(std::move(items));
  }

  void
  expectEnd() const
  {
    if (m_pos != m_in.size()) {
      throw DecodeError("trailing bytes after packet");
    }
  }

private:
  std::span<const std::uint8_t> m_in;
  std::size_t m_pos = 0;
};

template<class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

const Name&
nameOf(const Packet& pkt)
{
  return std::visit([] (const auto& p) -> const Name& { return p.name; }, pkt);
}

std::size_t
wireSize(const Packet& pkt)
{
  return std::visit(Overloaded{
    [] (const Interest& i) { return HEADER_SIZE + tagBytes(i.tag); },
    [] (const Data& d) { return HEADER_SIZE + d.payloadSize + tagBytes(d.tag); },
    [] (const Nack&) { return HEADER_SIZE; },
  }, pkt);
}

std::vector<std::uint8_t>
encode(const Packet& pkt)
{
  Writer w;
  std::visit(Overloaded{
    [&] (const Interest& i) {
      w.u8(TYPE_INTEREST);
      w.name(i.name);
      w.u8(i.probe ? 1 : 0);
      w.u8(i.hopBudget);
      w.tag(i.tag);
    },
    [&] (const Data& d) {
      w.u8(TYPE_DATA);
      w.name(d.name);
      w.u8(d.fromIntermediate ? 1 : 0);
      w.u32(d.payloadSize);
      w.tag(d.tag);
    },
    [&] (const Nack& n) {
      w.u8(TYPE_NACK);
      w.name(n.name);
      w.u8(static_cast<std::uint8_t>(n.reason));
    },
  }, pkt);
  return w.take();
}

Packet
decode(std::span<const std::uint8_t> wire)
{
  Reader r(wire);
  auto type = r.u8();
  switch (type) {
    case TYPE_INTEREST: {
      Interest i;
      i.name = r.name();
      auto flags = r.u8();
      if (flags > 1) {
        throw DecodeError("bad interest flags");
      }
      i.probe = flags == 1;
      i.hopBudget = r.u8();
      i.tag = r.tag();
      r.expectEnd();
      return i;
    }
    case TYPE_DATA: {
      Data d;
      d.name = r.name();
      auto flags = r.u8();
      if (flags > 1) {
        throw DecodeError("bad data flags");
      }
      d.fromIntermediate = flags == 1;
      d.payloadSize = r.u32();
      d.tag = r.tag();
      r.expectEnd();
      return d;
    }
    case TYPE_NACK: {
      Nack n;
      n.name = r.name();
      auto reason = r.u8();
      if (reason != static_cast<std::uint8_t>(NackReason::PathFailure) &&
          reason != static_cast<std::uint8_t>(NackReason::NoRoute)) {
        throw DecodeError("bad nack reason");
      }
      n.reason = static_cast<NackReason>(reason);
      r.expectEnd();
      return n;
    }
    default:
      throw DecodeError("unknown packet type " + std::to_string(type));
  }
}

} // namespace ptp
