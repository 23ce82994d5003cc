#ifndef PTP_SCENARIO_HPP
#define PTP_SCENARIO_HPP

#include "ptp/consumer.hpp"
#include "ptp/forwarder.hpp"
#include "ptp/link.hpp"
#include "ptp/producer.hpp"

#include <map>
#include <string>
#include <vector>

namespace ptp {

enum class NodeKind : std::uint8_t {
  Router,
  Consumer,
  Producer,
};

struct NodeSpec
{
  NodeId id = 0;
  NodeKind kind = NodeKind::Router;
  RouterConfig router;
  int line = 0;
};

struct LinkSpec
{
  NodeId a = 0;
  NodeId b = 0;
  LinkParams params;
  int line = 0;
};

/// FIB entry given by neighbour node ids; resolved to faces when the network is built.
struct RouteSpec
{
  NodeId node = 0;
  Name prefix;
  std::vector<NodeId> via;
  int line = 0;
};

struct CatalogSpec
{
  NodeId node = 0;
  CatalogEntry entry;
  int line = 0;
};

struct ConsumerSpec
{
  NodeId node = 0;
  ConsumerConfig config;
  int line = 0;
};

/// Fills a router's content store with \p count distinct SEQs drawn from [0, range).
struct PreseedSpec
{
  NodeId node = 0;
  Name prefix;
  std::uint64_t count = 0;
  std::uint64_t range = 0;
  std::uint32_t payloadSize = DEFAULT_PAYLOAD_SIZE;
  int line = 0;
};

struct ScriptStep
{
  Time at = 0;
  bool up = false;
  NodeId a = 0;
  NodeId b = 0;
  int line = 0;
};

/// Directed link, Data direction, as "from>to".
struct DirectedLink
{
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const DirectedLink&, const DirectedLink&) = default;
};

/// Assertion checked against the report: metric name, its parameters and bounds.
struct Expectation
{
  std::string metric;
  std::map<std::string, std::string> params;
  std::optional<double> min;
  std::optional<double> max;
  int line = 0;
};

struct Scenario
{
  std::string name = "unnamed";
  std::string description;
  Time duration = fromSeconds(60);
  std::uint64_t seed = 1;
  double warmupFraction = 0.1;
  Time bucket = fromSeconds(1);
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;
  std::vector<RouteSpec> routes;
  std::vector<CatalogSpec> catalogs;
  std::vector<ConsumerSpec> consumers;
  std::vector<PreseedSpec> preseeds;
  std::vector<ScriptStep> scripts;
  /// Links whose summed throughput is compared against the max-flow bound.
  std::vector<DirectedLink> cut;
  std::vector<Expectation> expectations;

  Time
  windowStart() const;

  const NodeSpec*
  findNode(NodeId id) const;
};

/**
 * Parses the line-based scenario format: one "directive key=value ..." per line, '#'
 * starts a comment. Throws ConfigError carrying the line number on malformed input.
 */
Scenario
parseScenario(std::string_view text);

/// Semantic checks that need the whole file (references, duplicates).
void
validateScenario(const Scenario& scenario);

/**
 * Applies one "key=value" override. Keys: duration, seed, warmup, bucket, and
 * consumer.<field> / link.<field> / router.<field> applied to every matching item.
 */
void
applyOverride(Scenario& scenario, std::string_view assignment);

} // namespace ptp

#endif // PTP_SCENARIO_HPP
