#pragma once

#include <vector>

#include "scimap/mapping/graph.hpp"

namespace scimap::mapping {

struct PageRankOptions {
  double damping = 0.85;
  /// L1 change between iterations.
  double tolerance = 1e-9;
  int max_iter = 200;
};

/// Weighted PageRank, one score per node index.  Undirected edges are walked
/// both ways; mass at nodes without out-links is spread uniformly.  Throws
/// DomainError on an empty graph and Error (with the last residual) when the
/// iteration does not settle within max_iter.
std::vector<double> pagerank(const Graph& g, const PageRankOptions& options = {});

/// Hop-count betweenness (Brandes).  Edge weights are ignored.  Undirected
/// pairs are counted once.
std::vector<double> betweenness(const Graph& g);

/// Agglomerative random-walk clustering.  Returns the merge stage with the
/// highest modularity; the reported modularity is recomputed from the final
/// partition.
Clustering walktrap(const Graph& g, int walk_length = 4);

}  // namespace scimap::mapping
