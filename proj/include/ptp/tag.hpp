#ifndef PTP_TAG_HPP
#define PTP_TAG_HPP

#include "ptp/common.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ptp {

/**
 * \brief Stack of interface identifiers recording one transmission path.
 *
 * Probe Data collects the receiving face of each router it crosses (push); a tagged
 * Interest replays them in reverse (pop), so the top is always the next hop to take.
 */
class Tag
{
public:
  class Error : public std::logic_error
  {
  public:
    using std::logic_error::logic_error;
  };

  Tag() = default;

  explicit
  Tag(std::vector<FaceId> bottomToTop)
    : m_stack(std::move(bottomToTop))
  {
  }

  void
  push(FaceId face)
  {
    m_stack.push_back(face);
  }

  /// Removes and returns the top identifier. Throws Tag::Error when empty.
  FaceId
  pop()
  {
    if (m_stack.empty()) {
      throw Error("pop on empty tag");
    }
    FaceId top = m_stack.back();
    m_stack.pop_back();
    return top;
  }

  FaceId
  top() const
  {
    if (m_stack.empty()) {
      throw Error("top of empty tag");
    }
    return m_stack.back();
  }

  std::size_t
  size() const noexcept
  {
    return m_stack.size();
  }

  bool
  empty() const noexcept
  {
    return m_stack.empty();
  }

  /// Bottom first.
  const std::vector<FaceId>&
  items() const noexcept
  {
    return m_stack;
  }

  std::string
  toString() const;

  friend bool operator==(const Tag&, const Tag&) = default;
  friend auto operator<=>(const Tag&, const Tag&) = default;

private:
  std::vector<FaceId> m_stack;
};

} // namespace ptp

#endif // PTP_TAG_HPP
