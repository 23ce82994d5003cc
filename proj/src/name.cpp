#include "ptp/name.hpp"

#include <charconv>

namespace ptp {

Name::Name(std::vector<std::string> components)
  : m_components(std::move(components))
{
  for (const auto& c : m_components) {
    if (c.empty()) {
      throw Error("empty name component");
    }
    if (c.find('/') != std::string::npos) {
      throw Error("name component contains '/'");
    }
  }
}

Name
Name::parse(std::string_view uri)
{
  if (uri.empty() || uri.front() != '/') {
    throw Error("name must start with '/': '" + std::string(uri) + "'");
  }
  std::vector<std::string> components;
  if (uri.size() == 1) {
    return Name{};
  }
  std::size_t pos = 1;
  while (pos <= uri.size()) {
    auto next = uri.find('/', pos);
    if (next == std::string_view::npos) {
      next = uri.size();
    }
    if (next == pos) {
      throw Error("empty component in '" + std::string(uri) + "'");
    }
    components.emplace_back(uri.substr(pos, next - pos));
    pos = next + 1;
  }
  return Name(std::move(components));
}

Name
Name::prefix(std::size_t n) const
{
  if (n > m_components.size()) {
    throw Error("prefix longer than name");
  }
  Name result;
  result.m_components.assign(m_components.begin(), m_components.begin() + static_cast<std::ptrdiff_t>(n));
  return result;
}

Name
Name::append(std::string component) const
{
  if (component.empty() || component.find('/') != std::string::npos) {
    throw Error("invalid name component");
  }
  Name result = *this;
  result.m_components.push_back(std::move(component));
  return result;
}

bool
Name::isPrefixOf(const Name& other) const noexcept
{
  if (m_components.size() > other.m_components.size()) {
    return false;
  }
  for (std::size_t i = 0; i < m_components.size(); ++i) {
    if (m_components[i] != other.m_components[i]) {
      return false;
    }
  }
  return true;
}

std::string
Name::toUri() const
{
  if (m_components.empty()) {
    return "/";
  }
  std::string uri;
  for (const auto& c : m_components) {
    uri += '/';
    uri += c;
  }
  return uri;
}

FlowName
flowNameOf(const Name& name)
{
  if (name.size() < 2) {
    throw Name::Error("flow traffic needs a prefix and a sequence component: '" + name.toUri() + "'");
  }
  return FlowName(name.prefix(name.size() - 1));
}

std::uint64_t
sequenceOf(const Name& name)
{
  if (name.empty()) {
    throw Name::Error("empty name has no sequence component");
  }
  const auto& last = name.at(name.size() - 1);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(last.data(), last.data() + last.size(), value);
  if (ec != std::errc{} || ptr != last.data() + last.size()) {
    throw Name::Error("last component is not a sequence number: '" + name.toUri() + "'");
  }
  return value;
}

} // namespace ptp
