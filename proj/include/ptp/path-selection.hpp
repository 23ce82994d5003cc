#ifndef PTP_PATH_SELECTION_HPP
#define PTP_PATH_SELECTION_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace ptp {

enum class SelectionStrategy : std::uint8_t {
  Bandwidth,
  Random,
  Hop,
  Latency,
  LatencyVariance,
};

std::string_view
toString(SelectionStrategy s);

std::optional<SelectionStrategy>
parseSelectionStrategy(std::string_view text);

/// What a strategy may look at for one selectable (in-use or unused) path.
struct PathCandidate
{
  std::uint32_t id = 0;
  bool inUse = false;
  double bandwidth = 0.0;
  std::size_t hops = 0;
  double latency = 0.0;
};

struct SelectionChange
{
  std::vector<std::uint32_t> demote;
  std::vector<std::uint32_t> promote;

  bool
  empty() const noexcept
  {
    return demote.empty() && promote.empty();
  }
};

/**
 * Moving deviation over sorted RTTs: sum over the W values starting at \p start of the
 * squared distance to their sum divided by W. Windows running past the end use the
 * remaining values.
 */
double
movingDeviation(std::span<const double> sortedRtts, std::size_t start, std::size_t window);

/**
 * Periodic re-selection. Bandwidth and random strategies swap at most one in-use path for
 * a uniformly chosen unused one; the ranking strategies recompute the whole in-use set
 * (up to \p maxPaths paths), ties broken by lower id.
 */
SelectionChange
selectPaths(SelectionStrategy strategy, std::span<const PathCandidate> candidates,
            std::size_t maxPaths, std::size_t window, std::mt19937_64& rng);

} // namespace ptp

#endif // PTP_PATH_SELECTION_HPP
