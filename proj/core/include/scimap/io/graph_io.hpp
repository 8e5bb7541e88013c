#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scimap/io/table.hpp"
#include "scimap/mapping/graph.hpp"

namespace scimap::io {

enum class GraphFlavor { GraphML, Dot };

std::optional<GraphFlavor> graphFlavorFromString(std::string_view s);

/// Nodes carry label, weight and (when a clustering is given) cluster; edges
/// carry weight.  Header entries and graph metadata become comments.
std::string writeGraph(const mapping::Graph& g, const mapping::Clustering* clustering,
                       GraphFlavor flavor, const ArtifactHeader& header = {});

struct ReadGraph {
  mapping::Graph graph;
  /// Cluster per node index, when every node had one.
  std::optional<std::vector<std::size_t>> clusters;
};

/// Readers for the files produced by writeGraph.  Throw ParseError on input
/// they do not understand.
ReadGraph readGraphml(std::string_view text, const std::string& file = "<graphml>");
ReadGraph readDot(std::string_view text, const std::string& file = "<dot>");

}  // namespace scimap::io
