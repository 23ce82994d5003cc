#ifndef PTP_TESTS_ORACLES_HPP
#define PTP_TESTS_ORACLES_HPP

// Reference implementations written independently of the library code they check.

#include "ptp/fib.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace ptp::oracle {

/// Longest prefix match by scanning every entry.
inline const FibEntry*
lpmLinear(const Fib& fib, const Name& name)
{
  const FibEntry* best = nullptr;
  for (const FibEntry* e : fib.entries()) {
    const auto& p = e->prefix.components();
    if (p.size() > name.size()) {
      continue;
    }
    bool match = true;
    for (std::size_t i = 0; i < p.size() && match; ++i) {
      match = p[i] == name.at(i);
    }
    if (match && (best == nullptr || p.size() > best->prefix.size())) {
      best = e;
    }
  }
  return best;
}

/// Names over a small alphabet so that prefixes collide often.
inline Name
randomName(std::mt19937_64& rng, std::size_t minLen, std::size_t maxLen)
{
  static const char* const words[] = {"a", "b", "c", "d", "e", "f"};
  std::size_t len = minLen + rng() % (maxLen - minLen + 1);
  std::vector<std::string> comps;
  for (std::size_t i = 0; i < len; ++i) {
    comps.emplace_back(words[rng() % 6]);
  }
  return Name(std::move(comps));
}

/// alpha = cwnd_total * max_p(cwnd_p / rtt_p^2) / (sum_p cwnd_p / rtt_p)^2, evaluated term by term.
inline double
alphaDirect(const std::vector<double>& cwnd, const std::vector<double>& rtt)
{
  double total = 0.0;
  double best = 0.0;
  double denom = 0.0;
  for (std::size_t i = 0; i < cwnd.size(); ++i) {
    total += cwnd[i];
    double term = cwnd[i] / (rtt[i] * rtt[i]);
    if (term > best) {
      best = term;
    }
    denom += cwnd[i] / rtt[i];
  }
  return total * best / (denom * denom);
}

} // namespace ptp::oracle

#endif // PTP_TESTS_ORACLES_HPP
