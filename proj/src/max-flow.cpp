#include "ptp/max-flow.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>

#include <map>
#include <set>

namespace ptp {

namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using Graph = boost::adjacency_list<
  boost::vecS, boost::vecS, boost::directedS, boost::no_property,
  boost::property<boost::edge_capacity_t, double,
                  boost::property<boost::edge_residual_capacity_t, double,
                                  boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;

} // namespace

double
maxFlowBps(const Scenario& s, NodeId consumer, bool followRoutes)
{
  std::map<NodeId, std::size_t> index;
  for (const auto& n : s.nodes) {
    index.emplace(n.id, index.size());
  }
  std::size_t source = index.size();
  Graph g(source + 1);
  auto capacity = boost::get(boost::edge_capacity, g);
  auto reverse = boost::get(boost::edge_reverse, g);

  auto addEdge = [&](std::size_t u, std::size_t v, double cap) {
    auto e = boost::add_edge(u, v, g).first;
    auto r = boost::add_edge(v, u, g).first;
    capacity[e] = cap;
    capacity[r] = 0.0;
    reverse[e] = r;
    reverse[r] = e;
  };

  double total = 0.0;
  std::map<std::pair<NodeId, NodeId>, double> bandwidth;
  for (const auto& l : s.links) {
    double bw = l.params.bandwidthBps > 0 ? l.params.bandwidthBps : 1e18;
    bandwidth[std::minmax(l.a, l.b)] = bw;
    total += bw;
  }
  auto kindOf = [&](NodeId id) { return s.findNode(id)->kind; };

  std::set<std::pair<NodeId, NodeId>> edges;
  if (followRoutes) {
    for (const auto& r : s.routes) {
      for (auto v : r.via) {
        edges.emplace(v, r.node);
      }
    }
    for (const auto& l : s.links) {
      if (kindOf(l.a) == NodeKind::Consumer) {
        edges.emplace(l.b, l.a);
      }
      if (kindOf(l.b) == NodeKind::Consumer) {
        edges.emplace(l.a, l.b);
      }
    }
  }
  else {
    for (const auto& l : s.links) {
      edges.emplace(l.a, l.b);
      edges.emplace(l.b, l.a);
    }
  }
  for (const auto& [from, to] : edges) {
    addEdge(index.at(from), index.at(to), bandwidth.at(std::minmax(from, to)));
  }
  for (const auto& n : s.nodes) {
    if (n.kind == NodeKind::Producer) {
      addEdge(source, index.at(n.id), total + 1.0);
    }
  }
  return boost::edmonds_karp_max_flow(g, source, index.at(consumer));
}

} // namespace ptp
