#include "ptp/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace ptp {

namespace {

struct Token
{
  std::string key;
  std::string value;
};

std::vector<std::string>
splitList(const std::string& text, char sep = ',')
{
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

/// Splits one line into the directive and key=value tokens; values may be double-quoted.
std::pair<std::string, std::vector<Token>>
tokenize(std::string_view line, int lineNo)
{
  std::vector<std::string> words;
  std::string current;
  bool quoted = false;
  bool any = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      any = true;
    }
    else if (!quoted && (c == ' ' || c == '\t' || c == '\r')) {
      if (any) {
        words.push_back(current);
      }
      current.clear();
      any = false;
    }
    else if (!quoted && c == '#') {
      break;
    }
    else {
      current += c;
      any = true;
    }
  }
  if (quoted) {
    throw ConfigError("unterminated quote", lineNo);
  }
  if (any) {
    words.push_back(current);
  }
  if (words.empty()) {
    return {};
  }
  std::vector<Token> tokens;
  for (std::size_t i = 1; i < words.size(); ++i) {
    auto eq = words[i].find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("expected key=value, got '" + words[i] + "'", lineNo);
    }
    tokens.push_back({words[i].substr(0, eq), words[i].substr(eq + 1)});
  }
  return {words[0], tokens};
}

/// Key/value view of one directive; every key must be consumed exactly once.
class Fields
{
public:
  Fields(std::string directive, std::vector<Token> tokens, int line)
    : m_directive(std::move(directive))
    , m_line(line)
  {
    for (auto& t : tokens) {
      if (!m_values.emplace(t.key, t.value).second) {
        throw ConfigError(m_directive + ": duplicate field '" + t.key + "'", line);
      }
    }
  }

  int
  line() const noexcept
  {
    return m_line;
  }

  std::optional<std::string>
  take(const std::string& key)
  {
    auto it = m_values.find(key);
    if (it == m_values.end()) {
      return std::nullopt;
    }
    std::string v = it->second;
    m_values.erase(it);
    return v;
  }

  std::string
  require(const std::string& key)
  {
    auto v = take(key);
    if (!v) {
      throw ConfigError(m_directive + ": missing field '" + key + "'", m_line);
    }
    return *v;
  }

  /// Moves the remaining fields out (used by 'expect', which accepts free-form parameters).
  std::map<std::string, std::string>
  rest()
  {
    return std::exchange(m_values, {});
  }

  void
  finish() const
  {
    if (!m_values.empty()) {
      throw ConfigError(m_directive + ": unknown field '" + m_values.begin()->first + "'", m_line);
    }
  }

private:
  std::string m_directive;
  int m_line;
  std::map<std::string, std::string> m_values;
};

double
toDouble(const std::string& key, const std::string& text, int line)
{
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("field '" + key + "': not a number: '" + text + "'", line);
  }
  return v;
}

std::uint64_t
toUnsigned(const std::string& key, const std::string& text, int line)
{
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("field '" + key + "': not a non-negative integer: '" + text + "'", line);
  }
  return v;
}

bool
toBool(const std::string& key, const std::string& text, int line)
{
  if (text == "1" || text == "true" || text == "yes") {
    return true;
  }
  if (text == "0" || text == "false" || text == "no") {
    return false;
  }
  throw ConfigError("field '" + key + "': expected 0/1, got '" + text + "'", line);
}

NodeId
toNode(const std::string& key, const std::string& text, int line)
{
  auto v = toUnsigned(key, text, line);
  if (v == 0 || v > 0xFFFFFFFFull) {
    throw ConfigError("field '" + key + "': node ids are positive 32-bit integers", line);
  }
  return static_cast<NodeId>(v);
}

Name
toName(const std::string& key, const std::string& text, int line)
{
  try {
    Name n = Name::parse(text);
    if (n.empty()) {
      throw ConfigError("field '" + key + "': name prefix must not be empty", line);
    }
    return n;
  }
  catch (const Name::Error& e) {
    throw ConfigError("field '" + key + "': " + e.what(), line);
  }
}

Time
toSecondsField(const std::string& key, const std::string& text, int line)
{
  double s = toDouble(key, text, line);
  if (s < 0) {
    throw ConfigError("field '" + key + "' must be non-negative", line);
  }
  return fromSeconds(s);
}

void
applyRouterKey(RouterConfig& cfg, const std::string& key, const std::string& value, int line)
{
  if (key == "fab") {
    cfg.fabCapacity = toUnsigned(key, value, line);
    if (cfg.fabCapacity == 0) {
      throw ConfigError("fab capacity must be positive", line);
    }
  }
  else if (key == "cs") {
    cfg.csCapacity = toUnsigned(key, value, line);
  }
  else if (key == "cs_admit") {
    cfg.csAdmit = toBool(key, value, line);
  }
  else if (key == "pit") {
    cfg.pitLifetime = toSecondsField(key, value, line);
  }
  else {
    throw ConfigError("unknown router field '" + key + "'", line);
  }
}

void
applyLinkKey(LinkParams& p, const std::string& key, const std::string& value, int line)
{
  if (key == "bandwidth_kbps") {
    p.bandwidthBps = toDouble(key, value, line) * 1e3;
  }
  else if (key == "bandwidth_mbps") {
    p.bandwidthBps = toDouble(key, value, line) * 1e6;
  }
  else if (key == "latency_ms") {
    double ms = toDouble(key, value, line);
    if (ms < 0) {
      throw ConfigError("latency must be non-negative", line);
    }
    p.latency = fromMillis(ms);
  }
  else if (key == "queue_pkts") {
    p.queueCapacity = toUnsigned(key, value, line);
    if (p.queueCapacity == 0) {
      throw ConfigError("queue must hold at least one packet", line);
    }
  }
  else {
    throw ConfigError("unknown link field '" + key + "'", line);
  }
  if (p.bandwidthBps < 0) {
    throw ConfigError("bandwidth must be non-negative", line);
  }
}

void
applyConsumerKey(ConsumerConfig& c, const std::string& key, const std::string& value, int line)
{
  if (key == "prefix") {
    c.flow = FlowName(toName(key, value, line));
  }
  else if (key == "packets") {
    c.totalPackets = toUnsigned(key, value, line);
  }
  else if (key == "start") {
    c.start = toSecondsField(key, value, line);
  }
  else if (key == "stop") {
    c.stop = toSecondsField(key, value, line);
  }
  else if (key == "paths") {
    c.maxPaths = toUnsigned(key, value, line);
    if (c.maxPaths == 0) {
      throw ConfigError("paths must be positive", line);
    }
  }
  else if (key == "switch") {
    c.switchPeriod = toSecondsField(key, value, line);
    if (c.switchPeriod == 0) {
      throw ConfigError("switch period must be positive", line);
    }
  }
  else if (key == "probe_rate") {
    c.probeRate = toDouble(key, value, line);
    if (!(c.probeRate > 0)) {
      throw ConfigError("probe rate must be positive", line);
    }
  }
  else if (key == "probe_timeout") {
    c.probeTimeout = toSecondsField(key, value, line);
  }
  else if (key == "strategy") {
    auto s = parseSelectionStrategy(value);
    if (!s) {
      throw ConfigError("unknown strategy '" + value + "'", line);
    }
    c.strategy = *s;
  }
  else if (key == "window") {
    c.varianceWindow = toUnsigned(key, value, line);
    if (c.varianceWindow == 0) {
      throw ConfigError("window must be positive", line);
    }
  }
  else if (key == "two_packet") {
    c.twoPacketLossDetection = toBool(key, value, line);
  }
  else if (key == "rtt_scaling") {
    if (value == "path") {
      c.rttScaling = RttScaling::PathOverReference;
    }
    else if (value == "reference") {
      c.rttScaling = RttScaling::ReferenceOverPath;
    }
    else {
      throw ConfigError("rtt_scaling is 'path' or 'reference'", line);
    }
  }
  else if (key == "ref_rtt_ms") {
    double ms = toDouble(key, value, line);
    if (!(ms > 0)) {
      throw ConfigError("reference RTT must be positive", line);
    }
    c.referenceRtt = ms / 1000.0;
  }
  else if (key == "beta") {
    c.window.beta = toDouble(key, value, line);
    if (!(c.window.beta > 0 && c.window.beta < 1)) {
      throw ConfigError("beta must lie in (0, 1)", line);
    }
  }
  else if (key == "cwnd_min") {
    c.window.cwndMin = toDouble(key, value, line);
  }
  else if (key == "cwnd_init") {
    c.window.initialCwnd = toDouble(key, value, line);
  }
  else if (key == "ssthresh") {
    c.window.initialSsthresh = toDouble(key, value, line);
  }
  else if (key == "bw_gain") {
    c.bandwidthGain = toDouble(key, value, line);
  }
  else if (key == "min_rto_ms") {
    c.rto.minRto = toDouble(key, value, line) / 1000.0;
  }
  else if (key == "init_rto_ms") {
    c.rto.initialRto = toDouble(key, value, line) / 1000.0;
  }
  else {
    throw ConfigError("unknown consumer field '" + key + "'", line);
  }
  if (!(c.window.cwndMin > 0) || c.window.initialCwnd < c.window.cwndMin) {
    throw ConfigError("need 0 < cwnd_min <= cwnd_init", line);
  }
}

NodeKind
toKind(const std::string& text, int line)
{
  if (text == "router") {
    return NodeKind::Router;
  }
  if (text == "consumer") {
    return NodeKind::Consumer;
  }
  if (text == "producer") {
    return NodeKind::Producer;
  }
  throw ConfigError("node kind must be router, consumer or producer", line);
}

DirectedLink
toDirected(const std::string& text, int line)
{
  auto gt = text.find('>');
  if (gt == std::string::npos) {
    throw ConfigError("directed link must be written from>to, got '" + text + "'", line);
  }
  return {toNode("from", text.substr(0, gt), line), toNode("to", text.substr(gt + 1), line)};
}

void
parseLine(Scenario& s, const std::string& directive, Fields f)
{
  int line = f.line();
  if (directive == "scenario") {
    if (auto v = f.take("name")) {
      s.name = *v;
    }
    if (auto v = f.take("description")) {
      s.description = *v;
    }
    if (auto v = f.take("duration")) {
      s.duration = toSecondsField("duration", *v, line);
    }
    if (auto v = f.take("seed")) {
      s.seed = toUnsigned("seed", *v, line);
    }
    if (auto v = f.take("warmup")) {
      s.warmupFraction = toDouble("warmup", *v, line);
      if (s.warmupFraction < 0 || s.warmupFraction >= 1) {
        throw ConfigError("warmup is a fraction in [0, 1)", line);
      }
    }
    if (auto v = f.take("bucket")) {
      s.bucket = toSecondsField("bucket", *v, line);
      if (s.bucket == 0) {
        throw ConfigError("bucket must be positive", line);
      }
    }
  }
  else if (directive == "node") {
    NodeKind kind = toKind(f.require("kind"), line);
    std::string ids = f.require("id");
    RouterConfig router;
    for (auto& [k, v] : f.rest()) {
      if (kind != NodeKind::Router) {
        throw ConfigError("node: '" + k + "' applies to routers only", line);
      }
      applyRouterKey(router, k, v, line);
    }
    for (const auto& id : splitList(ids)) {
      s.nodes.push_back({toNode("id", id, line), kind, router, line});
    }
  }
  else if (directive == "link") {
    LinkSpec l;
    l.a = toNode("a", f.require("a"), line);
    l.b = toNode("b", f.require("b"), line);
    l.line = line;
    for (auto& [k, v] : f.rest()) {
      applyLinkKey(l.params, k, v, line);
    }
    s.links.push_back(l);
  }
  else if (directive == "route") {
    RouteSpec r;
    r.node = toNode("node", f.require("node"), line);
    r.prefix = toName("prefix", f.require("prefix"), line);
    for (const auto& v : splitList(f.require("via"))) {
      r.via.push_back(toNode("via", v, line));
    }
    if (r.via.empty()) {
      throw ConfigError("route: 'via' lists no neighbours", line);
    }
    r.line = line;
    s.routes.push_back(r);
  }
  else if (directive == "catalog") {
    CatalogSpec c;
    c.node = toNode("node", f.require("node"), line);
    c.entry.prefix = toName("prefix", f.require("prefix"), line);
    if (auto v = f.take("packets")) {
      c.entry.packets = toUnsigned("packets", *v, line);
    }
    if (auto v = f.take("payload")) {
      c.entry.payloadSize = static_cast<std::uint32_t>(toUnsigned("payload", *v, line));
    }
    c.line = line;
    s.catalogs.push_back(c);
  }
  else if (directive == "consumer") {
    ConsumerSpec c;
    c.node = toNode("node", f.require("node"), line);
    c.line = line;
    applyConsumerKey(c.config, "prefix", f.require("prefix"), line);
    for (auto& [k, v] : f.rest()) {
      applyConsumerKey(c.config, k, v, line);
    }
    s.consumers.push_back(c);
  }
  else if (directive == "preseed") {
    PreseedSpec p;
    p.node = toNode("node", f.require("node"), line);
    p.prefix = toName("prefix", f.require("prefix"), line);
    p.count = toUnsigned("count", f.require("count"), line);
    p.range = toUnsigned("range", f.require("range"), line);
    if (auto v = f.take("payload")) {
      p.payloadSize = static_cast<std::uint32_t>(toUnsigned("payload", *v, line));
    }
    if (p.count > p.range) {
      throw ConfigError("preseed: count exceeds range", line);
    }
    p.line = line;
    s.preseeds.push_back(p);
  }
  else if (directive == "script") {
    ScriptStep step;
    step.at = toSecondsField("at", f.require("at"), line);
    std::string action = f.require("action");
    if (action != "down" && action != "up") {
      throw ConfigError("script: action is 'down' or 'up'", line);
    }
    step.up = action == "up";
    step.a = toNode("a", f.require("a"), line);
    step.b = toNode("b", f.require("b"), line);
    step.line = line;
    s.scripts.push_back(step);
  }
  else if (directive == "cut") {
    for (const auto& item : splitList(f.require("links"))) {
      s.cut.push_back(toDirected(item, line));
    }
  }
  else if (directive == "expect") {
    Expectation e;
    e.metric = f.require("metric");
    if (auto v = f.take("min")) {
      e.min = toDouble("min", *v, line);
    }
    if (auto v = f.take("max")) {
      e.max = toDouble("max", *v, line);
    }
    e.params = f.rest();
    e.line = line;
    s.expectations.push_back(e);
  }
  else {
    throw ConfigError("unknown directive '" + directive + "'", line);
  }
  f.finish();
}

} // namespace

Time
Scenario::windowStart() const
{
  // align to bucket boundaries so window sums cover whole buckets
  Time raw = static_cast<Time>(static_cast<double>(duration) * warmupFraction);
  return (raw + bucket - 1) / bucket * bucket;
}

const NodeSpec*
Scenario::findNode(NodeId id) const
{
  auto it = std::find_if(nodes.begin(), nodes.end(), [id](const auto& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

Scenario
parseScenario(std::string_view text)
{
  Scenario s;
  int lineNo = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++lineNo;
    auto [directive, tokens] = tokenize(line, lineNo);
    if (directive.empty()) {
      continue;
    }
    parseLine(s, directive, Fields(directive, std::move(tokens), lineNo));
  }
  validateScenario(s);
  return s;
}

void
validateScenario(const Scenario& s)
{
  std::map<NodeId, NodeKind> kinds;
  for (const auto& n : s.nodes) {
    if (!kinds.emplace(n.id, n.kind).second) {
      throw ConfigError("node " + std::to_string(n.id) + " declared twice", n.line);
    }
  }
  auto need = [&](NodeId id, int line, std::optional<NodeKind> kind = std::nullopt) {
    auto it = kinds.find(id);
    if (it == kinds.end()) {
      throw ConfigError("unknown node " + std::to_string(id), line);
    }
    if (kind && it->second != *kind) {
      throw ConfigError("node " + std::to_string(id) + " has the wrong kind for this directive",
                        line);
    }
  };
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& l : s.links) {
    need(l.a, l.line);
    need(l.b, l.line);
    if (l.a == l.b) {
      throw ConfigError("link connects node " + std::to_string(l.a) + " to itself", l.line);
    }
    if (!pairs.insert(std::minmax(l.a, l.b)).second) {
      throw ConfigError("duplicate link " + std::to_string(l.a) + "-" + std::to_string(l.b),
                        l.line);
    }
  }
  auto linked = [&](NodeId a, NodeId b) { return pairs.count(std::minmax(a, b)) > 0; };
  std::set<std::pair<NodeId, Name>> routeKeys;
  for (const auto& r : s.routes) {
    need(r.node, r.line, NodeKind::Router);
    if (!routeKeys.emplace(r.node, r.prefix).second) {
      throw ConfigError("duplicate route for " + r.prefix.toUri() + " at node " +
                          std::to_string(r.node),
                        r.line);
    }
    for (auto v : r.via) {
      if (!linked(r.node, v)) {
        throw ConfigError("route at node " + std::to_string(r.node) + " via " + std::to_string(v) +
                            ": no such link",
                          r.line);
      }
    }
  }
  for (const auto& c : s.catalogs) {
    need(c.node, c.line, NodeKind::Producer);
  }
  std::set<NodeId> consumerNodes;
  for (const auto& c : s.consumers) {
    need(c.node, c.line, NodeKind::Consumer);
    if (!consumerNodes.insert(c.node).second) {
      throw ConfigError("node " + std::to_string(c.node) + " runs more than one consumer", c.line);
    }
    if (c.config.stop <= c.config.start) {
      throw ConfigError("consumer stop must be after start", c.line);
    }
  }
  for (const auto& p : s.preseeds) {
    need(p.node, p.line, NodeKind::Router);
  }
  for (const auto& st : s.scripts) {
    if (!linked(st.a, st.b)) {
      throw ConfigError("script refers to missing link", st.line);
    }
  }
  for (const auto& d : s.cut) {
    if (!linked(d.from, d.to)) {
      throw ConfigError("cut refers to missing link " + std::to_string(d.from) + ">" +
                        std::to_string(d.to));
    }
  }
  if (s.duration <= 0) {
    throw ConfigError("duration must be positive");
  }
  if (s.windowStart() >= s.duration) {
    throw ConfigError("warm-up leaves no measurement window");
  }
}

void
applyOverride(Scenario& s, std::string_view assignment)
{
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must be key=value, got '" + std::string(assignment) + "'");
  }
  std::string key(assignment.substr(0, eq));
  std::string value(assignment.substr(eq + 1));
  auto dot = key.find('.');
  if (dot == std::string::npos) {
    Fields f("override", {{key, value}}, 0);
    parseLine(s, "scenario", std::move(f));
  }
  else {
    std::string scope = key.substr(0, dot);
    std::string field = key.substr(dot + 1);
    if (scope == "consumer") {
      for (auto& c : s.consumers) {
        applyConsumerKey(c.config, field, value, 0);
      }
    }
    else if (scope == "link") {
      for (auto& l : s.links) {
        applyLinkKey(l.params, field, value, 0);
      }
    }
    else if (scope == "router") {
      for (auto& n : s.nodes) {
        if (n.kind == NodeKind::Router) {
          applyRouterKey(n.router, field, value, 0);
        }
      }
    }
    else {
      throw ConfigError("unknown override scope '" + scope + "'");
    }
  }
  validateScenario(s);
}

} // namespace ptp
