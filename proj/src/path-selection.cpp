#include "ptp/path-selection.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ptp {

std::string_view
toString(SelectionStrategy s)
{
  switch (s) {
    case SelectionStrategy::Bandwidth:
      return "bandwidth";
    case SelectionStrategy::Random:
      return "random";
    case SelectionStrategy::Hop:
      return "hop";
    case SelectionStrategy::Latency:
      return "latency";
    case SelectionStrategy::LatencyVariance:
      return "latency_variance";
  }
  return "?";
}

std::optional<SelectionStrategy>
parseSelectionStrategy(std::string_view text)
{
  for (auto s : {SelectionStrategy::Bandwidth, SelectionStrategy::Random, SelectionStrategy::Hop,
                 SelectionStrategy::Latency, SelectionStrategy::LatencyVariance}) {
    if (toString(s) == text) {
      return s;
    }
  }
  return std::nullopt;
}

double
movingDeviation(std::span<const double> sortedRtts, std::size_t start, std::size_t window)
{
  if (window == 0) {
    throw std::invalid_argument("window must be positive");
  }
  std::size_t end = std::min(sortedRtts.size(), start + window);
  double sum = 0.0;
  for (std::size_t k = start; k < end; ++k) {
    sum += sortedRtts[k];
  }
  double mean = sum / static_cast<double>(window);
  double dev = 0.0;
  for (std::size_t k = start; k < end; ++k) {
    dev += (sortedRtts[k] - mean) * (sortedRtts[k] - mean);
  }
  return dev;
}

namespace {

std::uint32_t
pickUniform(const std::vector<std::uint32_t>& ids, std::mt19937_64& rng)
{
  return ids[rng() % ids.size()];
}

SelectionChange
diff(std::span<const PathCandidate> candidates, const std::set<std::uint32_t>& wanted)
{
  SelectionChange change;
  for (const auto& c : candidates) {
    bool want = wanted.count(c.id) > 0;
    if (c.inUse && !want) {
      change.demote.push_back(c.id);
    }
    else if (!c.inUse && want) {
      change.promote.push_back(c.id);
    }
  }
  return change;
}

template<typename Key>
std::vector<PathCandidate>
ranked(std::span<const PathCandidate> candidates, Key key)
{
  std::vector<PathCandidate> out(candidates.begin(), candidates.end());
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    auto ka = key(a);
    auto kb = key(b);
    return ka != kb ? ka < kb : a.id < b.id;
  });
  return out;
}

} // namespace

SelectionChange
selectPaths(SelectionStrategy strategy, std::span<const PathCandidate> candidates,
            std::size_t maxPaths, std::size_t window, std::mt19937_64& rng)
{
  std::vector<std::uint32_t> inUse;
  std::vector<std::uint32_t> unused;
  for (const auto& c : candidates) {
    (c.inUse ? inUse : unused).push_back(c.id);
  }

  switch (strategy) {
    case SelectionStrategy::Bandwidth:
    case SelectionStrategy::Random: {
      if (unused.empty()) {
        return {};
      }
      SelectionChange change;
      if (inUse.empty()) {
        change.promote.push_back(pickUniform(unused, rng));
        return change;
      }
      if (strategy == SelectionStrategy::Bandwidth) {
        const PathCandidate* lowest = nullptr;
        for (const auto& c : candidates) {
          if (c.inUse && (lowest == nullptr || c.bandwidth < lowest->bandwidth)) {
            lowest = &c;
          }
        }
        change.demote.push_back(lowest->id);
      }
      else {
        change.demote.push_back(pickUniform(inUse, rng));
      }
      change.promote.push_back(pickUniform(unused, rng));
      return change;
    }
    case SelectionStrategy::Hop:
    case SelectionStrategy::Latency: {
      auto order = strategy == SelectionStrategy::Hop
                     ? ranked(candidates, [](const auto& c) { return static_cast<double>(c.hops); })
                     : ranked(candidates, [](const auto& c) { return c.latency; });
      std::set<std::uint32_t> wanted;
      for (std::size_t i = 0; i < order.size() && i < maxPaths; ++i) {
        wanted.insert(order[i].id);
      }
      return diff(candidates, wanted);
    }
    case SelectionStrategy::LatencyVariance: {
      auto order = ranked(candidates, [](const auto& c) { return c.latency; });
      std::vector<double> rtts;
      for (const auto& c : order) {
        rtts.push_back(c.latency);
      }
      std::size_t starts = rtts.size() > window ? rtts.size() - window + 1 : 1;
      std::size_t best = 0;
      double bestDev = movingDeviation(rtts, 0, window);
      for (std::size_t n = 1; n < starts; ++n) {
        double dev = movingDeviation(rtts, n, window);
        if (dev < bestDev) {
          bestDev = dev;
          best = n;
        }
      }
      std::set<std::uint32_t> wanted;
      for (std::size_t i = best; i < order.size() && i < best + window && wanted.size() < maxPaths;
           ++i) {
        wanted.insert(order[i].id);
      }
      return diff(candidates, wanted);
    }
  }
  return {};
}

} // namespace ptp
