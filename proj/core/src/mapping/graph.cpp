#include "scimap/mapping/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "scimap/error.hpp"

namespace scimap::mapping {

std::optional<std::size_t> Graph::find(std::string_view id) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                                   [](const Node& n, std::string_view key) { return n.id < key; });
  if (it == nodes.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

double Graph::totalLinkStrength() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.weight;
  return s;
}

std::vector<double> Graph::strength() const {
  std::vector<double> s(nodes.size(), 0.0);
  for (const auto& e : edges) {
    s[e.u] += e.weight;
    s[e.v] += e.weight;
  }
  return s;
}

std::vector<std::vector<std::pair<std::size_t, double>>> Graph::adjacency() const {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(nodes.size());
  for (const auto& e : edges) {
    adj[e.u].emplace_back(e.v, e.weight);
    if (!directed) adj[e.v].emplace_back(e.u, e.weight);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

void GraphBuilder::addNode(const std::string& id, const std::string& label, double weight) {
  auto [it, inserted] = nodes_.try_emplace(id, Node{id, label, weight});
  if (!inserted) it->second.weight = weight;
}

void GraphBuilder::addEdge(const std::string& a, const std::string& b, double weight) {
  if (!nodes_.count(a) || !nodes_.count(b))
    throw Error("edge endpoint not in graph: " + (nodes_.count(a) ? b : a));
  if (a == b) return;
  if (!directed_ && b < a) {
    edges_[{b, a}] += weight;
  } else {
    edges_[{a, b}] += weight;
  }
}

Graph GraphBuilder::build() const {
  Graph g;
  g.directed = directed_;
  std::map<std::string, bool> touched;
  if (drop_isolated_) {
    for (const auto& [key, w] : edges_) {
      if (w <= 0.0) continue;
      touched[key.first] = true;
      touched[key.second] = true;
    }
  }
  std::map<std::string, std::size_t> index;
  for (const auto& [id, node] : nodes_) {
    if (drop_isolated_ && !touched.count(id)) continue;
    index[id] = g.nodes.size();
    g.nodes.push_back(node);
  }
  for (const auto& [key, w] : edges_) {
    if (w <= 0.0) continue;
    g.edges.push_back({index.at(key.first), index.at(key.second), w});
  }
  // Map iteration is by id, and ids sort like indices, so edges are already
  // in (u, v) order.
  return g;
}

std::map<std::string, std::size_t> Clustering::assignment(const Graph& g) const {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < membership.size() && i < g.nodes.size(); ++i)
    out[g.nodes[i].id] = membership[i];
  return out;
}

std::vector<std::vector<std::size_t>> Clustering::members() const {
  std::vector<std::vector<std::size_t>> out(cluster_count);
  for (std::size_t i = 0; i < membership.size(); ++i) out[membership[i]].push_back(i);
  return out;
}

double modularity(const Graph& g, const std::vector<std::size_t>& membership) {
  if (membership.size() != g.nodes.size())
    throw DomainError("membership size does not match node count");
  double m = 0.0;
  for (const auto& e : g.edges) m += e.weight;
  if (m <= 0.0) return 0.0;
  std::size_t k = 0;
  for (auto c : membership) k = std::max(k, c + 1);
  std::vector<double> inside(k, 0.0);
  std::vector<double> degree(k, 0.0);
  for (const auto& e : g.edges) {
    if (membership[e.u] == membership[e.v]) inside[membership[e.u]] += e.weight;
    degree[membership[e.u]] += e.weight;
    degree[membership[e.v]] += e.weight;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double share = degree[c] / (2.0 * m);
    q += inside[c] / m - share * share;
  }
  return q;
}

std::optional<std::vector<std::size_t>> topologicalOrder(const Graph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<std::size_t>> out(n);
  for (const auto& e : g.edges) {
    out[e.u].push_back(e.v);
    ++indeg[e.v];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const auto i = ready.top();
    ready.pop();
    order.push_back(i);
    for (auto j : out[i])
      if (--indeg[j] == 0) ready.push(j);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

}  // namespace scimap::mapping
