#include "scimap/io/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>

#include "scimap/error.hpp"
#include "scimap/text.hpp"

namespace scimap::io {

std::optional<GraphFlavor> graphFlavorFromString(std::string_view s) {
  const std::string l = text::toLower(s);
  if (l == "graphml" || l == "xml") return GraphFlavor::GraphML;
  if (l == "dot" || l == "gv") return GraphFlavor::Dot;
  return std::nullopt;
}

namespace {

std::string xmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::string xmlUnescape(std::string_view s) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool hit = false;
    if (s[i] == '&') {
      for (const auto& [ent, c] : kEntities)
        if (s.substr(i, ent.size()) == ent) {
          out.push_back(c);
          i += ent.size();
          hit = true;
          break;
        }
    }
    if (!hit) out.push_back(s[i++]);
  }
  return out;
}

// "--" may not appear inside an XML comment.
std::string commentSafe(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  std::size_t p;
  while ((p = s.find("--")) != std::string::npos) s.replace(p, 2, "- -");
  return s;
}

std::string dotQuote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::pair<std::string, std::string>> commentLines(const mapping::Graph& g,
                                                              const ArtifactHeader& header) {
  std::vector<std::pair<std::string, std::string>> lines = header.entries;
  for (const auto& [k, v] : g.metadata) lines.emplace_back(k, v);
  for (const auto& f : g.flags) lines.emplace_back("flag", f);
  return lines;
}

std::string writeGraphml(const mapping::Graph& g, const mapping::Clustering* clustering,
                         const ArtifactHeader& header) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const auto& [k, v] : commentLines(g, header)) out << "<!-- " << commentSafe(k + ": " + v) << " -->\n";
  out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  out << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
  out << "  <key id=\"weight\" for=\"node\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  if (clustering) out << "  <key id=\"cluster\" for=\"node\" attr.name=\"cluster\" attr.type=\"int\"/>\n";
  out << "  <key id=\"eweight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  out << "  <graph id=\"G\" edgedefault=\"" << (g.directed ? "directed" : "undirected") << "\">\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    out << "    <node id=\"" << xmlEscape(n.id) << "\">";
    out << "<data key=\"label\">" << xmlEscape(n.label) << "</data>";
    out << "<data key=\"weight\">" << text::shortest(n.weight) << "</data>";
    if (clustering) out << "<data key=\"cluster\">" << clustering->membership.at(i) << "</data>";
    out << "</node>\n";
  }
  for (const auto& e : g.edges) {
    out << "    <edge source=\"" << xmlEscape(g.nodes[e.u].id) << "\" target=\""
        << xmlEscape(g.nodes[e.v].id) << "\"><data key=\"eweight\">" << text::shortest(e.weight)
        << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string writeDot(const mapping::Graph& g, const mapping::Clustering* clustering,
                     const ArtifactHeader& header) {
  std::ostringstream out;
  for (const auto& [k, v] : commentLines(g, header)) {
    std::string line = k + ": " + v;
    for (auto& c : line)
      if (c == '\n' || c == '\r') c = ' ';
    out << "// " << line << "\n";
  }
  const char* arrow = g.directed ? " -> " : " -- ";
  out << (g.directed ? "digraph" : "graph") << " G {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    out << "  " << dotQuote(n.id) << " [label=" << dotQuote(n.label) << ", weight=" << text::shortest(n.weight);
    if (clustering) out << ", cluster=" << clustering->membership.at(i);
    out << "];\n";
  }
  for (const auto& e : g.edges)
    out << "  " << dotQuote(g.nodes[e.u].id) << arrow << dotQuote(g.nodes[e.v].id)
        << " [weight=" << text::shortest(e.weight) << "];\n";
  out << "}\n";
  return out.str();
}

double parseDouble(std::string_view s, const std::string& file) {
  double v = 0.0;
  const auto t = text::trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError(file, std::nullopt, std::nullopt, "bad number '" + std::string(t) + "'");
  return v;
}

std::optional<std::string> attribute(std::string_view tag, std::string_view name) {
  const std::string needle = " " + std::string(name) + "=\"";
  const auto p = tag.find(needle);
  if (p == std::string_view::npos) return std::nullopt;
  const auto start = p + needle.size();
  const auto end = tag.find('"', start);
  if (end == std::string_view::npos) return std::nullopt;
  return xmlUnescape(tag.substr(start, end - start));
}

struct PendingNode {
  std::string id;
  std::string label;
  double weight = 0.0;
  std::optional<std::size_t> cluster;
};

ReadGraph assemble(bool directed, const std::vector<PendingNode>& nodes,
                   const std::vector<std::tuple<std::string, std::string, double>>& edges) {
  mapping::GraphBuilder b(directed);
  std::map<std::string, std::optional<std::size_t>> clusters;
  for (const auto& n : nodes) {
    b.addNode(n.id, n.label, n.weight);
    clusters[n.id] = n.cluster;
  }
  for (const auto& [u, v, w] : edges) b.addEdge(u, v, w);
  ReadGraph r;
  r.graph = b.build();
  std::vector<std::size_t> c;
  for (const auto& n : r.graph.nodes) {
    const auto& cl = clusters[n.id];
    if (!cl) return r;
    c.push_back(*cl);
  }
  if (!r.graph.nodes.empty()) r.clusters = std::move(c);
  return r;
}

}  // namespace

std::string writeGraph(const mapping::Graph& g, const mapping::Clustering* clustering, GraphFlavor flavor,
                       const ArtifactHeader& header) {
  if (clustering && clustering->membership.size() != g.nodes.size())
    throw DomainError("clustering does not cover the graph");
  return flavor == GraphFlavor::GraphML ? writeGraphml(g, clustering, header)
                                        : writeDot(g, clustering, header);
}

ReadGraph readGraphml(std::string_view text, const std::string& file) {
  const auto graphTag = text.find("<graph ");
  if (graphTag == std::string_view::npos)
    throw ParseError(file, std::nullopt, std::nullopt, "no <graph> element");
  const auto graphEnd = text.find('>', graphTag);
  const auto edgedefault = attribute(text.substr(graphTag, graphEnd - graphTag), "edgedefault");
  const bool directed = edgedefault && *edgedefault == "directed";

  std::vector<PendingNode> nodes;
  std::vector<std::tuple<std::string, std::string, double>> edges;
  std::size_t pos = graphEnd;
  while (true) {
    const auto open = text.find('<', pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find('>', open);
    if (close == std::string_view::npos)
      throw ParseError(file, std::nullopt, open, "unterminated tag");
    const std::string_view tag = text.substr(open, close - open + 1);
    const auto endOf = [&](std::string_view closing) {
      const auto e = text.find(closing, close);
      if (e == std::string_view::npos)
        throw ParseError(file, std::nullopt, open, "missing " + std::string(closing));
      return e;
    };
    const auto dataValues = [&](std::string_view body) {
      std::map<std::string, std::string> values;
      std::size_t p = 0;
      while ((p = body.find("<data ", p)) != std::string_view::npos) {
        const auto gt = body.find('>', p);
        const auto end = body.find("</data>", gt);
        if (gt == std::string_view::npos || end == std::string_view::npos)
          throw ParseError(file, std::nullopt, open + p, "malformed <data>");
        const auto key = attribute(body.substr(p, gt - p), "key");
        if (key) values[*key] = xmlUnescape(body.substr(gt + 1, end - gt - 1));
        p = end;
      }
      return values;
    };
    if (text::startsWith(tag, "<node ")) {
      const auto id = attribute(tag, "id");
      if (!id) throw ParseError(file, std::nullopt, open, "node without id");
      const auto end = endOf("</node>");
      const auto values = dataValues(text.substr(close + 1, end - close - 1));
      PendingNode n;
      n.id = *id;
      n.label = values.count("label") ? values.at("label") : *id;
      if (values.count("weight")) n.weight = parseDouble(values.at("weight"), file);
      if (values.count("cluster"))
        n.cluster = static_cast<std::size_t>(parseDouble(values.at("cluster"), file));
      nodes.push_back(std::move(n));
      pos = end + 7;
    } else if (text::startsWith(tag, "<edge ")) {
      const auto src = attribute(tag, "source");
      const auto dst = attribute(tag, "target");
      if (!src || !dst) throw ParseError(file, std::nullopt, open, "edge without endpoints");
      const auto end = endOf("</edge>");
      const auto values = dataValues(text.substr(close + 1, end - close - 1));
      const double w = values.count("eweight") ? parseDouble(values.at("eweight"), file) : 1.0;
      edges.emplace_back(*src, *dst, w);
      pos = end + 7;
    } else {
      pos = close + 1;
    }
  }
  try {
    return assemble(directed, nodes, edges);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(file, std::nullopt, std::nullopt, e.what());
  }
}

namespace {

// Tokens of one DOT statement: quoted strings, bare words and punctuation.
std::vector<std::string> dotTokens(std::string_view line, const std::string& file, std::size_t lineNo) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < line.size();) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (c == '"') {
      std::string s = "\"";
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          s.push_back(line[i + 1] == 'n' ? '\n' : line[i + 1]);
          i += 2;
        } else if (line[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          s.push_back(line[i++]);
        }
      }
      if (!closed) throw ParseError(file, lineNo, std::nullopt, "unterminated string");
      out.push_back(std::move(s));
    } else if (c == '-' && i + 1 < line.size() && (line[i + 1] == '-' || line[i + 1] == '>')) {
      out.emplace_back(line.substr(i, 2));
      i += 2;
    } else if (c == '[' || c == ']' || c == '=' || c == ',' || c == ';' || c == '{' || c == '}') {
      out.emplace_back(1, c);
      ++i;
    } else {
      std::size_t j = i;
      while (j < line.size() && std::string_view(" \t\r[]=,;{}\"").find(line[j]) == std::string_view::npos)
        ++j;
      out.emplace_back(line.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

std::string unquote(const std::string& tok) { return !tok.empty() && tok[0] == '"' ? tok.substr(1) : tok; }

}  // namespace

ReadGraph readDot(std::string_view text, const std::string& file) {
  bool directed = false;
  bool started = false;
  std::vector<PendingNode> nodes;
  std::vector<std::tuple<std::string, std::string, double>> edges;
  std::size_t lineNo = 0;
  for (const auto& rawLine : text::split(text, '\n')) {
    ++lineNo;
    const auto line = text::trim(rawLine);
    if (line.empty() || text::startsWith(line, "//")) continue;
    const auto toks = dotTokens(line, file, lineNo);
    if (!started) {
      if (toks.empty() || (toks[0] != "graph" && toks[0] != "digraph"))
        throw ParseError(file, lineNo, std::nullopt, "expected graph or digraph");
      directed = toks[0] == "digraph";
      started = true;
      continue;
    }
    if (toks[0] == "}") break;
    std::map<std::string, std::string> attrs;
    const auto bracket = std::find(toks.begin(), toks.end(), "[");
    for (auto it = bracket; it != toks.end(); ++it)
      if (*it == "=" && it != bracket && it + 1 != toks.end()) attrs[unquote(*(it - 1))] = unquote(*(it + 1));
    const std::size_t head = static_cast<std::size_t>(bracket - toks.begin());
    if (head >= 3 && (toks[1] == "--" || toks[1] == "->")) {
      const double w = attrs.count("weight") ? parseDouble(attrs["weight"], file) : 1.0;
      edges.emplace_back(unquote(toks[0]), unquote(toks[2]), w);
    } else if (head >= 1) {
      PendingNode n;
      n.id = unquote(toks[0]);
      n.label = attrs.count("label") ? attrs["label"] : n.id;
      if (attrs.count("weight")) n.weight = parseDouble(attrs["weight"], file);
      if (attrs.count("cluster")) n.cluster = static_cast<std::size_t>(parseDouble(attrs["cluster"], file));
      nodes.push_back(std::move(n));
    }
  }
  if (!started) throw ParseError(file, std::nullopt, std::nullopt, "empty DOT input");
  try {
    return assemble(directed, nodes, edges);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(file, std::nullopt, std::nullopt, e.what());
  }
}

}  // namespace scimap::io
