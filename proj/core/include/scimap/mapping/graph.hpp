#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scimap::mapping {

struct Node {
  std::string id;
  std::string label;
  double weight = 0.0;
};

/// Endpoints are node indices.  Undirected edges always have u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0.0;
};

struct Graph {
  /// Sorted by id, so index order and id order agree.
  std::vector<Node> nodes;
  /// Sorted by (u, v).
  std::vector<Edge> edges;
  bool directed = false;
  std::vector<std::string> flags;
  std::map<std::string, std::string> metadata;

  std::optional<std::size_t> find(std::string_view id) const;
  double totalLinkStrength() const;
  /// Sum of incident edge weights per node (in + out for directed graphs).
  std::vector<double> strength() const;
  /// Neighbour lists; undirected edges appear on both sides, directed ones
  /// only from u.
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency() const;
};

/// Accumulates nodes and weighted edges keyed by id.  Repeated edges add up;
/// self-loops are ignored.
class GraphBuilder {
 public:
  explicit GraphBuilder(bool directed = false) : directed_(directed) {}

  /// Adds or updates a node; the first label given wins.
  void addNode(const std::string& id, const std::string& label, double weight);
  bool hasNode(const std::string& id) const { return nodes_.count(id) != 0; }
  /// Throws scimap::Error when an endpoint was never added.
  void addEdge(const std::string& a, const std::string& b, double weight);
  /// Drops nodes without incident edges.
  void dropIsolated() { drop_isolated_ = true; }

  Graph build() const;

 private:
  bool directed_;
  bool drop_isolated_ = false;
  std::map<std::string, Node> nodes_;
  std::map<std::pair<std::string, std::string>, double> edges_;
};

struct Clustering {
  /// Cluster id per node index, numbered by first appearance in node order.
  std::vector<std::size_t> membership;
  std::size_t cluster_count = 0;
  double modularity = 0.0;

  std::map<std::string, std::size_t> assignment(const Graph& g) const;
  std::vector<std::vector<std::size_t>> members() const;
};

/// Newman modularity of a partition on the undirected view of `g`.  Zero for
/// a graph without edges.
double modularity(const Graph& g, const std::vector<std::size_t>& membership);

/// Topological order of a directed graph, or nullopt if it has a cycle.
std::optional<std::vector<std::size_t>> topologicalOrder(const Graph& g);

}  // namespace scimap::mapping
