#ifndef PTP_NAME_HPP
#define PTP_NAME_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptp {

/**
 * \brief Hierarchical content name, e.g. /UCLA/video/p1/17.
 *
 * Flow traffic uses the last component as the decimal sequence number.
 */
class Name
{
public:
  class Error : public std::invalid_argument
  {
  public:
    using std::invalid_argument::invalid_argument;
  };

  Name() = default;

  explicit
  Name(std::vector<std::string> components);

  /// Parses the canonical "/a/b/3" form. Empty components are rejected.
  static Name
  parse(std::string_view uri);

  std::size_t
  size() const noexcept
  {
    return m_components.size();
  }

  bool
  empty() const noexcept
  {
    return m_components.empty();
  }

  const std::string&
  at(std::size_t i) const
  {
    return m_components.at(i);
  }

  const std::vector<std::string>&
  components() const noexcept
  {
    return m_components;
  }

  /// First \p n components.
  Name
  prefix(std::size_t n) const;

  Name
  append(std::string component) const;

  Name
  appendSequence(std::uint64_t seq) const
  {
    return append(std::to_string(seq));
  }

  bool
  isPrefixOf(const Name& other) const noexcept;

  std::string
  toUri() const;

  friend auto operator<=>(const Name&, const Name&) = default;
  friend bool operator==(const Name&, const Name&) = default;

private:
  std::vector<std::string> m_components;
};

/// Shared prefix of every packet in one flow: a content name minus its sequence postfix.
class FlowName
{
public:
  FlowName() = default;

  explicit
  FlowName(Name prefix)
    : m_name(std::move(prefix))
  {
  }

  const Name&
  name() const noexcept
  {
    return m_name;
  }

  std::string
  toUri() const
  {
    return m_name.toUri();
  }

  friend auto operator<=>(const FlowName&, const FlowName&) = default;
  friend bool operator==(const FlowName&, const FlowName&) = default;

private:
  Name m_name;
};

/// Drops the sequence component. Throws Name::Error for names with fewer than two components.
FlowName
flowNameOf(const Name& name);

/// Decimal value of the last component. Throws Name::Error if it is not a sequence number.
std::uint64_t
sequenceOf(const Name& name);

} // namespace ptp

#endif // PTP_NAME_HPP
